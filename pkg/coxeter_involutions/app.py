"""Application wiring: run configuration and the operations behind the CLI."""

from __future__ import annotations

import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .folding import Folding, fold
from .golden import VerifyReport, expected_table, load_golden, tabulated_types, verify, verify_all
from .involutions import Classification, classify, w0_pairing
from .oracles import AUTO, DEFAULT_MEMORY_BUDGET
from .rootsys import DiagramType, RootSystem, build, neg_w0_node_permutation, parse_permutation
from .weyl import CENTRALIZER, DEFAULT_CAP, FULL, SubgroupSpec, is_central, longest_element


LOGGER = logging.getLogger(__name__)


@dataclass
class RunConfig:
    """Runtime configuration shared by all subcommands."""

    cap: int = DEFAULT_CAP
    memory_budget: int = DEFAULT_MEMORY_BUDGET
    mode: str = AUTO
    subgroup: str = FULL
    output_format: str = "text"
    threads: int = 1
    realization: str = "C"
    golden_file: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "cap": self.cap,
            "memory_budget": self.memory_budget,
            "mode": self.mode,
            "subgroup": self.subgroup,
            "output_format": self.output_format,
            "threads": self.threads,
            "realization": self.realization,
            "golden_file": self.golden_file,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunConfig":
        return cls(
            cap=int(data.get("cap", DEFAULT_CAP)),
            memory_budget=int(data.get("memory_budget", DEFAULT_MEMORY_BUDGET)),
            mode=data.get("mode", AUTO),
            subgroup=data.get("subgroup", FULL),
            output_format=data.get("output_format", "text"),
            threads=int(data.get("threads", 1)),
            realization=data.get("realization", "C"),
            golden_file=data.get("golden_file"),
        )

    def copy(self) -> "RunConfig":
        return RunConfig.from_dict(self.to_dict())


class ClassificationApp:
    """Builds root systems and runs classification, pairing, folding and verification."""

    def __init__(self, config: RunConfig, *, progress: bool = False) -> None:
        self.config = config
        self.progress = progress
        self._tables = None

    def report_progress(self, message: str) -> None:
        if self.progress:
            print(f"  -> {message}", file=sys.stderr)

    def _reporter(self):
        return self.report_progress if self.progress else None

    @property
    def tables(self):
        if self._tables is None:
            path = Path(self.config.golden_file) if self.config.golden_file else None
            self._tables = load_golden(path)
        return self._tables

    def diagram(self, type_text: str) -> DiagramType:
        return DiagramType.parse(type_text, realization=self.config.realization)

    def system(self, type_text: str) -> RootSystem:
        return build(self.diagram(type_text))

    def spec_for(self, R: RootSystem, subgroup: str | None = None, sigma: str | None = None) -> SubgroupSpec:
        kind = SubgroupSpec(subgroup or self.config.subgroup).kind
        if kind == FULL:
            return SubgroupSpec.full()
        if kind == CENTRALIZER:
            return SubgroupSpec.centralizer()
        if sigma is None:
            raise ValueError("--subgroup sigma needs --sigma, e.g. --sigma 1:3")
        return SubgroupSpec.sigma_fixed(parse_permutation(sigma, R.rank))

    def pairing_spec(self, R: RootSystem, subgroup: str | None, sigma: str | None) -> SubgroupSpec:
        """The requested subgroup, falling back to W_o when w_o is not central in W."""

        if subgroup is None:
            try:
                return expected_table(R.diagram, self.tables).spec
            except ValueError:
                pass
        spec = self.spec_for(R, subgroup, sigma)
        if spec.kind == FULL and not is_central(R, longest_element(R)):
            LOGGER.info("w_o is not central in W(%s); pairing inside W_o", R.diagram)
            return SubgroupSpec.centralizer()
        return spec

    def classify(self, type_text: str, subgroup: str | None = None, sigma: str | None = None) -> Classification:
        R = self.system(type_text)
        spec = self.spec_for(R, subgroup, sigma)
        return self._classify(R, spec)

    def _classify(self, R: RootSystem, spec: SubgroupSpec) -> Classification:
        return classify(
            R,
            spec,
            self.config.mode,
            cap=self.config.cap,
            memory_budget=self.config.memory_budget,
            threads=self.config.threads,
            report_progress=self._reporter(),
        )

    def pair(
        self, type_text: str, subgroup: str | None = None, sigma: str | None = None
    ) -> tuple[Classification, dict[int, int]]:
        R = self.system(type_text)
        classes = self._classify(R, self.pairing_spec(R, subgroup, sigma))
        return classes, w0_pairing(classes)

    def fold(self, type_text: str, sigma: str | None = None) -> Folding:
        R = self.system(type_text)
        if sigma is None:
            permutation = neg_w0_node_permutation(R, longest_element(R))
        else:
            permutation = parse_permutation(sigma, R.rank)
        return fold(R, permutation)

    def verify(self, target: str, subgroup: str | None = None, sigma: str | None = None) -> list[VerifyReport]:
        options = dict(
            cap=self.config.cap,
            memory_budget=self.config.memory_budget,
            tables=self.tables,
            report_progress=self._reporter(),
        )
        if target.lower() == "all":
            types = tabulated_types()
            LOGGER.info("Verifying %d tabulated types", len(types))
            return verify_all(types, self.config.mode, threads=self.config.threads, **options)
        t = self.diagram(target)
        spec = None if subgroup is None else self.spec_for(build(t), subgroup, sigma)
        return [verify(t, spec, self.config.mode, threads=self.config.threads, **options)]


__all__ = ["ClassificationApp", "RunConfig"]
