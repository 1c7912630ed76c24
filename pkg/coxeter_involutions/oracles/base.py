"""Abstract base class for conjugacy oracles."""

from __future__ import annotations

import threading
from abc import ABC, abstractmethod
from typing import Protocol

from ..rootsys import RootSystem
from ..weyl import DEFAULT_CAP, ConjugacyResult, GroupElement, SubgroupSpec, negated_key


DEFAULT_MEMORY_BUDGET = 8 * 1024**3


class ProgressReporter(Protocol):
    """Receives one-line progress messages from group enumeration and orbit searches."""

    def __call__(self, message: str) -> None:
        ...


class ConjugacyOracle(ABC):
    """Decides conjugacy of involutions inside one subgroup of W(R).

    Classes are reported as sets of negated-root keys (see
    :func:`coxeter_involutions.weyl.negated_key`), which identify involutions
    uniquely.
    """

    name: str = "base"

    def __init__(
        self,
        system: RootSystem,
        spec: SubgroupSpec,
        *,
        cap: int = DEFAULT_CAP,
        memory_budget: int = DEFAULT_MEMORY_BUDGET,
        report_progress: ProgressReporter | None = None,
    ) -> None:
        self.system = system
        self.spec = spec
        self.cap = cap
        self.memory_budget = memory_budget
        self.report_progress = report_progress
        self._classes: dict[bytes, frozenset[bytes]] = {}
        self._lock = threading.Lock()

    @abstractmethod
    def load(self, report_progress: ProgressReporter | None = None) -> None:
        """Ensure any heavy resources (element tables, generator moves) are ready."""

    @abstractmethod
    def _class_keys(self, w: GroupElement) -> frozenset[bytes]:
        """Negated-root keys of all conjugates of ``w`` in the subgroup."""

    @abstractmethod
    def conjugate(self, w: GroupElement, w2: GroupElement, *, witness: bool = False) -> ConjugacyResult:
        """Decide whether ``w2`` is conjugate to ``w`` inside the subgroup."""

    def conjugacy_class(self, w: GroupElement) -> frozenset[bytes]:
        key = negated_key(w)
        cached = self._classes.get(key)
        if cached is not None:
            return cached
        members = self._class_keys(w)
        with self._lock:
            for member in members:
                self._classes.setdefault(member, members)
        return members

    def known_class(self, w: GroupElement) -> frozenset[bytes] | None:
        """The class of ``w`` if it has already been computed."""

        return self._classes.get(negated_key(w))

    def involution_keys(self) -> frozenset[bytes] | None:
        """Keys of every involution of the subgroup, when the oracle can list them."""

        return None
