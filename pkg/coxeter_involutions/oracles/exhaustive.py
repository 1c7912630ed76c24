"""Brute-force conjugacy over an enumerated element table."""

from __future__ import annotations

import logging
import time

import numpy as np

from ..errors import MemoryBudgetExceededError
from ..weyl import (
    ConjugacyResult,
    ElementTable,
    GroupElement,
    enumerate_subgroup,
    reduced_word,
    subgroup_order_bound,
)
from .base import ConjugacyOracle, ProgressReporter


LOGGER = logging.getLogger(__name__)


def _inverse_rows(block: np.ndarray) -> np.ndarray:
    inverse = np.empty_like(block)
    positions = np.broadcast_to(np.arange(block.shape[1], dtype=block.dtype), block.shape)
    np.put_along_axis(inverse, block.astype(np.intp), positions, axis=1)
    return inverse


def _unique_keys(masks: np.ndarray) -> set[bytes]:
    if not len(masks):
        return set()
    packed = np.unique(np.packbits(masks, axis=1), axis=0)
    return {row.tobytes() for row in packed}


class ExhaustiveOracle(ConjugacyOracle):
    """Enumerates the whole subgroup and tests x·w·x⁻¹ = w' directly."""

    name = "exhaustive"

    _table: ElementTable | None = None

    def load(self, report_progress: ProgressReporter | None = None) -> None:
        if self._table is not None:
            return
        R = self.system
        if R.diagram is not None:
            estimate = subgroup_order_bound(R, self.spec) * R.num_roots * np.dtype(R.perm_dtype).itemsize
            if estimate > self.memory_budget:
                raise MemoryBudgetExceededError(f"Element table of W({R.diagram})", estimate, self.memory_budget)
        started = time.perf_counter()
        self._table = enumerate_subgroup(R, self.spec, self.cap)
        LOGGER.info(
            "Exhaustive oracle ready for %s (%s): %d elements in %.3fs",
            R.diagram,
            self.spec,
            len(self._table),
            time.perf_counter() - started,
        )
        reporter = report_progress or self.report_progress
        if reporter is not None:
            reporter(f"enumerated {len(self._table)} elements of the {self.spec} subgroup")

    @property
    def table(self) -> ElementTable:
        self.load()
        return self._table

    def _class_keys(self, w: GroupElement) -> frozenset[bytes]:
        negation = self.system.negation
        keys: set[bytes] = set()
        for block in self.table.chunks():
            conjugates = np.take_along_axis(block, w.perm[_inverse_rows(block)], axis=1)
            keys |= _unique_keys(conjugates == negation)
        return frozenset(keys)

    def conjugate(self, w: GroupElement, w2: GroupElement, *, witness: bool = False) -> ConjugacyResult:
        for block in self.table.chunks():
            hits = np.flatnonzero(np.all(block[:, w.perm] == w2.perm[block], axis=1))
            if len(hits):
                if not witness:
                    return ConjugacyResult(True)
                x = GroupElement(self.system, block[hits[0]])
                return ConjugacyResult(True, witness=reduced_word(self.system, x))
        return ConjugacyResult(False)

    def involution_keys(self) -> frozenset[bytes]:
        negation = self.system.negation
        identity_row = np.arange(self.system.num_roots)
        keys: set[bytes] = set()
        for block in self.table.chunks():
            involutions = block[np.all(np.take_along_axis(block, block, axis=1) == identity_row, axis=1)]
            keys |= _unique_keys(involutions == negation)
        return frozenset(keys)
