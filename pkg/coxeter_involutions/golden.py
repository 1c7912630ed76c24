"""Expected w_o pairings with per-line provenance, and verification against them."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DiagramTypeError
from .involutions import (
    A_EVEN,
    A_ODD,
    BC,
    D_FAMILY,
    SPIN,
    Classification,
    PatternKey,
    classify,
    dagger_prediction,
    pattern_keys,
    pattern_nodes,
    w0_pairing,
)
from .oracles import DEFAULT_MEMORY_BUDGET, ProgressReporter
from .rootsys import DiagramType, NodeSet, build, format_nodes, parse_nodes
from .weyl import DEFAULT_CAP, SubgroupSpec, longest_parabolic


LOGGER = logging.getLogger(__name__)

DEFAULT_GOLDEN_FILE = Path(__file__).with_name("golden.txt")

SELF = "SELF"
TABLE = "TABLE"
DERIVED = "DERIVED"


@dataclass(frozen=True)
class Provenance:
    """Where a golden line comes from: a printed table row or a derivation."""

    kind: str
    source: str
    deviates: bool = False

    @classmethod
    def parse(cls, text: str) -> "Provenance":
        head, _, rest = text.strip().partition(" ")
        deviates = head.endswith("!")
        kind = head.rstrip("!").upper()
        if kind not in (TABLE, DERIVED):
            raise ValueError(f"Unknown provenance '{text}'. Expected {TABLE} or {DERIVED}.")
        if deviates and kind != DERIVED:
            raise ValueError("Only derived lines can deviate from the printed table.")
        return cls(kind, rest.strip(), deviates)

    def __str__(self) -> str:
        head = self.kind + ("!" if self.deviates else "")
        return f"{head} {self.source}".strip()


@dataclass(frozen=True)
class GoldenLine:
    number: int
    left: tuple[NodeSet, ...]
    right: tuple[NodeSet, ...] | None
    provenance: Provenance

    @property
    def is_self(self) -> bool:
        return self.right is None


@dataclass(frozen=True)
class GoldenTable:
    """Expected pairing of one diagram type inside one subgroup."""

    diagram: DiagramType
    spec: SubgroupSpec
    lines: tuple[GoldenLine, ...]

    def __post_init__(self) -> None:
        for line in self.lines:
            if not line.left or (line.right is not None and not line.right):
                raise ValueError(f"{self.diagram} line {line.number}: empty representative list.")
            for subset in line.left + (line.right or ()):
                if any(not 1 <= node <= self.diagram.rank for node in subset):
                    raise ValueError(
                        f"{self.diagram} line {line.number}: {format_nodes(subset)} outside 1..{self.diagram.rank}."
                    )

    def __len__(self) -> int:
        return len(self.lines)

    def line(self, number: int) -> GoldenLine:
        for line in self.lines:
            if line.number == number:
                return line
        raise KeyError(number)


def _parse_subsets(text: str) -> tuple[NodeSet, ...]:
    return tuple(parse_nodes(part) for part in text.split(";") if part.strip())


def _format_subsets(subsets: Sequence[NodeSet]) -> str:
    return ";".join(format_nodes(subset) for subset in subsets)


def load_golden(path: Path | None = None) -> dict[DiagramType, GoldenTable]:
    """Read a golden file; malformed lines are errors, not skipped."""

    file_path = path or DEFAULT_GOLDEN_FILE
    rows: dict[tuple[DiagramType, SubgroupSpec], list[GoldenLine]] = {}
    for number, raw in enumerate(file_path.read_text(encoding="utf-8").splitlines(), start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        fields = [part.strip() for part in text.split("|")]
        if len(fields) != 6:
            raise ValueError(f"{file_path}:{number}: expected 6 fields, found {len(fields)}.")
        type_text, spec_text, line_text, left_text, right_text, provenance_text = fields
        diagram = DiagramType.parse(type_text)
        line = GoldenLine(
            number=int(line_text),
            left=_parse_subsets(left_text),
            right=None if right_text.upper() == SELF else _parse_subsets(right_text),
            provenance=Provenance.parse(provenance_text),
        )
        rows.setdefault((diagram, SubgroupSpec(spec_text)), []).append(line)

    tables: dict[DiagramType, GoldenTable] = {}
    for (diagram, spec), lines in rows.items():
        if diagram in tables:
            raise ValueError(f"{file_path}: {diagram} is tabulated for more than one subgroup.")
        tables[diagram] = GoldenTable(diagram, spec, tuple(sorted(lines, key=lambda line: line.number)))
    LOGGER.debug("Loaded %d golden tables from %s", len(tables), file_path)
    return tables


def save_golden(tables: Iterable[GoldenTable], path: Path | None = None) -> None:
    file_path = path or DEFAULT_GOLDEN_FILE
    file_path.parent.mkdir(parents=True, exist_ok=True)
    content_lines = ["# type | spec | line | left subsets | right subsets or SELF | provenance"]
    for table in tables:
        content_lines.append("")
        for line in table.lines:
            right = SELF if line.right is None else _format_subsets(line.right)
            content_lines.append(
                f"{table.diagram} | {table.spec.label} | {line.number} | "
                f"{_format_subsets(line.left)} | {right} | {line.provenance}"
            )
    file_path.write_text("\n".join(content_lines) + "\n", encoding="utf-8")


# -- generated tables ----------------------------------------------------------------


def table1_dims(family: str, n: int, k: int, l: int) -> tuple[int, int]:
    """(dim^-(c_{k,l}), dim^-(w_o·c_{k,l})) for the classical families."""

    PatternKey(family, n, k, l)
    if family in (A_EVEN, A_ODD):
        return (2 * k + l, n - l)
    if family == BC:
        return (k + l, n - k - l)
    if family == D_FAMILY:
        if n % 2 == 0:
            return (k + l, n - k - l) if l % 2 == 0 else (k + l + 1, n - k - l + 1)
        return (k + l + 1, n - k - l) if l % 2 else (k + l, n + 1 - k - l)
    raise ValueError(f"Unknown family '{family}'. Available families: {A_EVEN}, {A_ODD}, {BC}, {D_FAMILY}")


def _family_of(t: DiagramType) -> tuple[str, int] | None:
    if t.series == "A":
        return (A_EVEN, t.rank // 2) if t.rank % 2 == 0 else (A_ODD, (t.rank + 1) // 2)
    if t.series in ("B", "C"):
        return (BC, t.rank)
    if t.series == "D":
        return (D_FAMILY, t.rank - 1)
    return None


_FAMILY_SOURCE = {
    A_EVEN: "A_2n:dagger",
    BC: "BC_n:dagger",
    D_FAMILY: "D_n+1:dagger",
}


def _provenance_for(family: str) -> Provenance:
    if family == A_ODD:
        return Provenance(DERIVED, "central block of max(2l-1,0) nodes read for the printed min{2l-1,0}", True)
    return Provenance(TABLE, _FAMILY_SOURCE[family])


def _classical_table(t: DiagramType, family: str, n: int) -> GoldenTable:
    merge_even = family == D_FAMILY and (n + 1) % 2 == 0

    def normal(key: tuple[int, int]) -> tuple[int, int]:
        k, l = key
        if merge_even and l >= 2 and l % 2 == 0:
            return (k, l - 1)
        return key

    members: dict[tuple[int, int], list[NodeSet]] = {}
    for key in pattern_keys(family, n):
        members.setdefault(normal((key.k, key.l)), []).append(pattern_nodes(key))

    lines: list[GoldenLine] = []
    done: set[tuple[int, int]] = set()
    for index, subsets in members.items():
        if index in done:
            continue
        partner = normal(dagger_prediction(n, *index))
        done.update({index, partner})
        provenance = _provenance_for(family)
        right = None if partner == index else tuple(members[partner])
        lines.append(GoldenLine(len(lines) + 1, tuple(subsets), right, provenance))

    if merge_even:
        m = (n + 1) // 2
        minus = pattern_nodes(PatternKey(SPIN, m, spin="-"))
        plus = pattern_nodes(PatternKey(SPIN, m, spin="+"))
        source = Provenance(TABLE, "D_even:spin")
        if (2 * m) % 4 == 0:
            lines.append(GoldenLine(len(lines) + 1, (minus,), None, source))
            lines.append(GoldenLine(len(lines) + 1, (plus,), None, source))
        else:
            lines.append(GoldenLine(len(lines) + 1, (minus,), (plus,), source))

    spec = SubgroupSpec.full() if t.has_central_longest else SubgroupSpec.centralizer()
    return GoldenTable(t, spec, tuple(lines))


def _dihedral_table(t: DiagramType) -> GoldenTable:
    n = t.gonality
    ends = Provenance(TABLE, "G2:1")
    if n % 2:
        return GoldenTable(t, SubgroupSpec.centralizer(), (GoldenLine(1, ((),), ((1, 2),), ends),))
    lines = [GoldenLine(1, ((),), ((1, 2),), ends)]
    reason = Provenance(DERIVED, "reflection classes swap iff n = 2 mod 4; printed even boxes are transposed", True)
    if n % 4 == 2:
        lines.append(GoldenLine(2, ((1,),), ((2,),), reason))
    else:
        lines.append(GoldenLine(2, ((1,),), None, reason))
        lines.append(GoldenLine(3, ((2,),), None, reason))
    return GoldenTable(t, SubgroupSpec.full(), tuple(lines))


def expected_table(t: DiagramType | str, tables: dict[DiagramType, GoldenTable] | None = None) -> GoldenTable:
    """The golden table of ``t``: stored for exceptional types, generated otherwise."""

    if isinstance(t, str):
        t = DiagramType.parse(t)
    stored = load_golden() if tables is None else tables
    if t in stored:
        return stored[t]
    if t.is_dihedral:
        return _dihedral_table(t)
    family = _family_of(t)
    if family is None:
        available = ", ".join(str(key) for key in sorted(stored))
        raise DiagramTypeError(f"No golden table for {t}. Tabulated types: {available}, A_n, BC_n, D_n, G2(n)")
    return _classical_table(t, *family)


def tabulated_types() -> list[DiagramType]:
    """Every type covered by ``verify all``."""

    types = [DiagramType("A", n) for n in range(1, 9)]
    types += [DiagramType("C", n) for n in range(2, 7)]
    types += [DiagramType("D", n) for n in range(4, 9)]
    types += [DiagramType("E", n) for n in (6, 7, 8)]
    types += [DiagramType("F", 4), DiagramType("H", 3), DiagramType("H", 4)]
    types += [DiagramType("G", 2, n) for n in range(2, 13)]
    return types


# -- verification ----------------------------------------------------------------------


@dataclass
class LineResult:
    line: GoldenLine
    passed: bool
    left_class: int | None = None
    right_class: int | None = None
    message: str = ""

    @property
    def note(self) -> str:
        if self.line.provenance.deviates:
            return f"differs from printed table: {self.line.provenance.source}"
        return ""

    def describe(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        right = SELF if self.line.is_self else _format_subsets(self.line.right)
        text = f"line {self.line.number}: {status} {_format_subsets(self.line.left)} <-> {right}"
        if self.message:
            text += f" ({self.message})"
        if self.note:
            text += f" [{self.note}]"
        return text


@dataclass
class VerifyReport:
    diagram: DiagramType
    spec: SubgroupSpec
    mode: str
    results: list[LineResult] = field(default_factory=list)
    discrepancies: list[str] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results) and not self.discrepancies

    def summary(self) -> str:
        good = sum(result.passed for result in self.results)
        status = "PASS" if self.passed else "FAIL"
        return f"{self.diagram} ({self.spec}, {self.mode}): {status} {good}/{len(self.results)} lines"

    def describe(self) -> str:
        lines = [self.summary()]
        lines.extend(f"  {result.describe()}" for result in self.results)
        lines.extend(f"  discrepancy: {item}" for item in self.discrepancies)
        return "\n".join(lines)


def _class_of_subsets(classes: Classification, subsets: Sequence[NodeSet]) -> tuple[int | None, str]:
    R = classes.system
    found = {classes.index_of(longest_parabolic(R, subset), strict=True) for subset in subsets}
    if len(found) != 1:
        return None, f"{_format_subsets(subsets)} fall into {len(found)} classes"
    return found.pop(), ""


def check_table(table: GoldenTable, classes: Classification, pairing: dict[int, int]) -> VerifyReport:
    """Compare a computed classification and pairing with a golden table."""

    report = VerifyReport(table.diagram, classes.spec, classes.mode)
    covered: set[int] = set()
    for line in table.lines:
        left, message = _class_of_subsets(classes, line.left)
        result = LineResult(line, False, left, message=message)
        if left is not None:
            covered.add(left)
            if line.is_self:
                result.right_class = left
                result.passed = pairing[left] == left
                if not result.passed:
                    result.message = f"class {left} is sent to class {pairing[left]}, not fixed"
            else:
                right, message = _class_of_subsets(classes, line.right)
                result.right_class = right
                if right is None:
                    result.message = message
                else:
                    covered.add(right)
                    result.passed = pairing[left] == right
                    if not result.passed:
                        result.message = f"class {left} is sent to class {pairing[left]}, expected {right}"
        if result.passed:
            LOGGER.info("%s %s", table.diagram, result.describe())
        else:
            LOGGER.error("%s %s", table.diagram, result.describe())
        if line.provenance.deviates:
            LOGGER.warning("%s line %d: %s", table.diagram, line.number, result.note)
        report.results.append(result)

    for index, cls in enumerate(classes):
        if index not in covered:
            report.discrepancies.append(
                f"class {index} {format_nodes(cls.canonical_subset)} appears on no line"
            )
    return report


def verify(
    t: DiagramType | str,
    spec: SubgroupSpec | None = None,
    mode: str = "auto",
    *,
    cap: int = DEFAULT_CAP,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
    threads: int = 1,
    tables: dict[DiagramType, GoldenTable] | None = None,
    report_progress: ProgressReporter | None = None,
) -> VerifyReport:
    """Classify, pair and compare with the golden table; golden data is never modified."""

    started = time.perf_counter()
    table = expected_table(t, tables)
    spec = spec or table.spec
    R = build(table.diagram)
    classes = classify(
        R,
        spec,
        mode,
        cap=cap,
        memory_budget=memory_budget,
        threads=threads,
        report_progress=report_progress,
    )
    report = check_table(table, classes, w0_pairing(classes))
    report.elapsed = time.perf_counter() - started
    LOGGER.info("%s in %.3fs", report.summary(), report.elapsed)
    return report


def verify_all(
    types: Sequence[DiagramType] | None = None,
    mode: str = "auto",
    *,
    cap: int = DEFAULT_CAP,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
    threads: int = 1,
    tables: dict[DiagramType, GoldenTable] | None = None,
    report_progress: ProgressReporter | None = None,
) -> list[VerifyReport]:
    """Verify every tabulated type; reports come back in input order."""

    chosen = list(types or tabulated_types())
    stored = load_golden() if tables is None else tables

    def work(t: DiagramType) -> VerifyReport:
        return verify(
            t,
            mode=mode,
            cap=cap,
            memory_budget=memory_budget,
            tables=stored,
            report_progress=report_progress,
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            return list(executor.map(work, chosen))
    return [work(t) for t in chosen]


__all__ = [
    "DEFAULT_GOLDEN_FILE",
    "GoldenLine",
    "GoldenTable",
    "LineResult",
    "Provenance",
    "VerifyReport",
    "check_table",
    "expected_table",
    "load_golden",
    "save_golden",
    "table1_dims",
    "tabulated_types",
    "verify",
    "verify_all",
]
