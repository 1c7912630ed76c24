"""Command-line interface: ``coxinv classify|pair|fold|verify|table TYPE``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Any, Sequence

from .app import ClassificationApp, RunConfig
from .config import ConfigManager, parse_memory
from .errors import ClassificationIncomplete, ResourceBudgetExceeded
from .folding import Folding
from .golden import VerifyReport
from .involutions import (
    A_EVEN,
    A_ODD,
    BC,
    D_FAMILY,
    SPIN,
    Classification,
    PatternKey,
    pattern_keys,
    pattern_nodes,
)
from .rootsys import format_nodes, format_permutation, format_types
from .weyl import reduced_word


LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCES = 3

FORMATS = ("text", "md", "json")
MODES = ("auto", "exhaustive", "orbit", "neg_orbit")
SUBGROUPS = ("full", "wo", "sigma")


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--subgroup",
        choices=SUBGROUPS,
        help="Subgroup to work in (classify: default from config or 'full'; pair/table/verify: the tabulated one).",
    )
    common.add_argument("--sigma", help="Node permutation in cycle notation for --subgroup sigma or fold, e.g. 1:3.")
    common.add_argument("--mode", choices=MODES, help="Conjugacy oracle (default from config or 'auto').")
    common.add_argument("--cap", type=int, help="Largest group the exhaustive oracle may enumerate.")
    common.add_argument("--memory-budget", help="Memory budget for tables and orbits, e.g. 512M or 8G.")
    common.add_argument("--format", dest="output_format", choices=FORMATS, help="Output format.")
    common.add_argument("--golden-file", help="Golden table file (default: the packaged table).")
    common.add_argument("--threads", type=int, help="Worker threads for per-bucket and per-type work.")
    common.add_argument("--realization", choices=("B", "C"), help="Realisation used for BC input.")
    common.add_argument("--log-level", default="WARNING", help="Logging level (default: %(default)s).")
    common.add_argument("--progress", action="store_true", help="Report progress on stderr.")
    common.add_argument("--save-config", action="store_true", help="Persist the merged settings.")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="coxinv",
        description="Involution classes of finite Weyl groups and their pairing under the longest element.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("classify", parents=[common], help="List involution conjugacy classes.").add_argument(
        "type", help="Diagram type such as E7, BC5, D6 or G2:8."
    )
    commands.add_parser("pair", parents=[common], help="Print the w_o pairing of classes.").add_argument(
        "type", help="Diagram type."
    )
    commands.add_parser("fold", parents=[common], help="Fold along --sigma (default -w_o).").add_argument(
        "type", help="Diagram type."
    )
    commands.add_parser("verify", parents=[common], help="Compare with the golden tables.").add_argument(
        "type", help="Diagram type, or 'all'."
    )
    commands.add_parser("table", parents=[common], help="Classes and pairing in one document.").add_argument(
        "type", help="Diagram type."
    )
    return parser


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    return build_parser().parse_args(argv)


def configure_logging(level: str) -> None:
    numeric_level = getattr(logging, level.upper(), logging.WARNING)
    logging.basicConfig(
        level=numeric_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


def merge_config(config: RunConfig, args: argparse.Namespace) -> RunConfig:
    merged = config.copy()
    if args.cap is not None:
        merged.cap = args.cap
    if args.memory_budget is not None:
        merged.memory_budget = parse_memory(args.memory_budget)
    if args.mode is not None:
        merged.mode = args.mode
    if args.output_format is not None:
        merged.output_format = args.output_format
    if args.golden_file is not None:
        merged.golden_file = args.golden_file
    if args.threads is not None:
        merged.threads = max(1, args.threads)
    if args.realization is not None:
        merged.realization = args.realization
    if args.command == "classify" and args.subgroup is not None:
        merged.subgroup = args.subgroup
    return merged


# -- rendering ------------------------------------------------------------------------


def _reps(subsets) -> str:
    return ";".join(format_nodes(subset) for subset in subsets)


def pattern_labels(classes: Classification) -> dict[int, str]:
    """Classical pattern names (c_{k,l}, c-/c+) of the classes they represent."""

    diagram = classes.system.diagram
    keys: list[PatternKey] = []
    if diagram.series == "A":
        family = A_EVEN if diagram.rank % 2 == 0 else A_ODD
        keys = pattern_keys(family, (diagram.rank + 1) // 2 if family == A_ODD else diagram.rank // 2)
    elif diagram.series in ("B", "C"):
        keys = pattern_keys(BC, diagram.rank)
    elif diagram.series == "D":
        keys = pattern_keys(D_FAMILY, diagram.rank - 1)
        if diagram.rank % 2 == 0:
            keys += [PatternKey(SPIN, diagram.rank // 2, spin="-"), PatternKey(SPIN, diagram.rank // 2, spin="+")]
    labels: dict[int, str] = {}
    for key in keys:
        nodes = pattern_nodes(key)
        for index, cls in enumerate(classes):
            if nodes in cls.subsets and index not in labels:
                labels[index] = str(key)
    return labels


def classes_payload(classes: Classification, pairing: dict[int, int] | None = None) -> dict[str, Any]:
    payload: dict[str, Any] = {
        "type": str(classes.system.diagram),
        "spec": classes.spec.label,
        "classes": classes.to_dict(),
    }
    if pairing is not None:
        payload["pairing"] = [[i, pairing[i]] for i in range(len(classes))]
    return payload


def render_json(payload: dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False)


def render_classes(classes: Classification, output_format: str) -> str:
    if output_format == "json":
        return render_json(classes_payload(classes))
    labels = pattern_labels(classes)
    header = f"{classes.system.diagram} ({classes.spec}, {classes.mode}): {len(classes)} involution classes"
    if output_format == "md":
        lines = [
            f"### {header}",
            "",
            "| # | reps | dim- | dim+ | neg type | plus type | size |",
            "|---|------|------|------|----------|-----------|------|",
        ]
        for index, cls in enumerate(classes):
            label = f" {labels[index]}" if index in labels else ""
            lines.append(
                f"| {index}{label} | {_reps(cls.subsets)} | {cls.dim_minus} | {cls.dim_plus} | "
                f"{format_types(cls.neg_type)} | {format_types(cls.plus_type)} | {cls.size} |"
            )
        return "\n".join(lines)
    lines = [header]
    for index, cls in enumerate(classes):
        label = f"  {labels[index]}" if index in labels else ""
        lines.append(f"  [{index}]{label}  {cls.describe()}  size={cls.size}")
    return "\n".join(lines)


def pairing_lines(classes: Classification, pairing: dict[int, int]) -> list[str]:
    """Arrow lines, one per orbit of the pairing, in class order."""

    labels = pattern_labels(classes)
    lines: list[str] = []
    seen: set[int] = set()
    for index in range(len(classes)):
        if index in seen:
            continue
        partner = pairing[index]
        seen.update({index, partner})
        left = _reps(classes[index].subsets)
        if index in labels:
            left = f"{labels[index]} {left}"
        if partner == index:
            right = "itself"
        else:
            right = _reps(classes[partner].subsets)
            if partner in labels:
                right = f"{labels[partner]} {right}"
        lines.append(f"({len(lines) + 1}) {left} <-> {right}")
    return lines


def render_pairing(classes: Classification, pairing: dict[int, int], output_format: str) -> str:
    if output_format == "json":
        return render_json(classes_payload(classes, pairing))
    header = f"{classes.system.diagram} ({classes.spec}, {classes.mode}): multiplication by w_o"
    body = pairing_lines(classes, pairing)
    if output_format == "md":
        return "\n".join([f"### {header}", ""] + [f"- {line}" for line in body])
    return "\n".join([header] + [f"  {line}" for line in body])


def render_table(classes: Classification, pairing: dict[int, int], output_format: str) -> str:
    if output_format == "json":
        return render_json(classes_payload(classes, pairing))
    return render_classes(classes, output_format) + "\n\n" + render_pairing(classes, pairing, output_format)


def render_folding(f: Folding, output_format: str) -> str:
    images = [reduced_word(f.ambient, generator) for generator in f.generators]
    if output_format == "json":
        return render_json(
            {
                "type": str(f.ambient.diagram),
                "sigma": format_permutation(f.sigma),
                "folded_type": str(f.folded.diagram),
                "orbits": [list(orbit) for orbit in f.orbits],
                "generators": [list(word) for word in images],
            }
        )
    lines = [f.describe()]
    for node, (orbit, word) in enumerate(zip(f.orbits, images), start=1):
        lines.append(f"  s{node} -> orbit {format_nodes(orbit)} word {list(word)}")
    if output_format == "md":
        return "\n".join([f"### {lines[0]}", ""] + [f"- {line.strip()}" for line in lines[1:]])
    return "\n".join(lines)


def render_reports(reports: list[VerifyReport], output_format: str) -> str:
    if output_format == "json":
        return render_json(
            {
                "reports": [
                    {
                        "type": str(report.diagram),
                        "spec": report.spec.label,
                        "mode": report.mode,
                        "passed": report.passed,
                        "lines": [
                            {"line": result.line.number, "passed": result.passed, "note": result.note}
                            for result in report.results
                        ],
                        "discrepancies": list(report.discrepancies),
                    }
                    for report in reports
                ]
            }
        )
    blocks = [report.describe() for report in reports]
    if len(reports) > 1:
        good = sum(report.passed for report in reports)
        blocks.append(f"{good}/{len(reports)} types passed")
    return "\n".join(blocks)


# -- entry point ----------------------------------------------------------------------


def run(args: argparse.Namespace, config: RunConfig) -> int:
    app = ClassificationApp(config, progress=args.progress)
    output_format = config.output_format
    if args.command == "classify":
        print(render_classes(app.classify(args.type, args.subgroup, args.sigma), output_format))
    elif args.command == "pair":
        classes, pairing = app.pair(args.type, args.subgroup, args.sigma)
        print(render_pairing(classes, pairing, output_format))
    elif args.command == "table":
        classes, pairing = app.pair(args.type, args.subgroup, args.sigma)
        print(render_table(classes, pairing, output_format))
    elif args.command == "fold":
        print(render_folding(app.fold(args.type, args.sigma), output_format))
    elif args.command == "verify":
        reports = app.verify(args.type, args.subgroup, args.sigma)
        print(render_reports(reports, output_format))
        if not all(report.passed for report in reports):
            return EXIT_FAILED
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = parse_args(argv)
    configure_logging(args.log_level)

    config_manager = ConfigManager()
    try:
        config = merge_config(config_manager.load(), args)
    except ValueError as exc:
        print(f"coxinv: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.save_config:
        config_manager.save(config)

    try:
        return run(args, config)
    except ResourceBudgetExceeded as exc:
        print(f"coxinv: {exc}", file=sys.stderr)
        return EXIT_RESOURCES
    except ClassificationIncomplete as exc:
        print(f"coxinv: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except ValueError as exc:
        print(f"coxinv: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
