"""Conjugacy via orbits of negated-root sets.

An involution is determined by the set of roots it negates, and conjugation
by x moves that set to its image under x. The class of w in a subgroup is
therefore the orbit of ``negated_roots(w)`` under the subgroup generators.
Sets are boolean rows; orbit members are deduplicated by their packed bytes.
"""

from __future__ import annotations

import logging
import time

import numpy as np

from ..errors import MemoryBudgetExceededError
from ..weyl import (
    ConjugacyResult,
    GroupElement,
    compose,
    identity,
    negated_key,
    negated_mask,
    reduced_word,
    subgroup_generators,
)
from .base import ConjugacyOracle, ProgressReporter


LOGGER = logging.getLogger(__name__)

# rough per-entry cost of a bytes key stored in a dict
_ENTRY_OVERHEAD = 120


class NegOrbitOracle(ConjugacyOracle):
    """Breadth-first search on negated-root sets under the subgroup generators."""

    name = "neg_orbit"

    _moves: list[np.ndarray] | None = None
    _generators: tuple[GroupElement, ...] = ()

    def load(self, report_progress: ProgressReporter | None = None) -> None:
        if self._moves is not None:
            return
        self._generators = subgroup_generators(self.system, self.spec)
        # the image of a subset S under g has mask[g(i)] = S[i], i.e. S[g⁻¹]
        self._moves = [np.argsort(g.perm) for g in self._generators]
        LOGGER.debug("Orbit oracle for %s (%s): %d generators", self.system.diagram, self.spec, len(self._moves))

    def _explore(
        self, start: np.ndarray, *, target: bytes | None = None, track: bool = False
    ) -> tuple[dict[bytes, tuple[bytes, int] | None], bool]:
        self.load()
        started = time.perf_counter()
        start_key = np.packbits(start).tobytes()
        parents: dict[bytes, tuple[bytes, int] | None] = {start_key: None}
        if target == start_key:
            return parents, True
        entry_cost = len(start_key) + _ENTRY_OVERHEAD
        frontier = start[None, :]
        frontier_keys = [start_key]
        depth = 0
        while len(frontier):
            layers: list[np.ndarray] = []
            next_keys: list[bytes] = []
            for move_index, move in enumerate(self._moves):
                images = frontier[:, move]
                packed = np.packbits(images, axis=1)
                fresh: list[int] = []
                for row in range(len(images)):
                    key = packed[row].tobytes()
                    if key in parents:
                        continue
                    parents[key] = (frontier_keys[row], move_index) if track else None
                    if key == target:
                        return parents, True
                    fresh.append(row)
                    next_keys.append(key)
                if fresh:
                    layers.append(images[fresh])
            frontier = np.concatenate(layers) if layers else frontier[:0]
            frontier_keys = next_keys
            depth += 1
            estimate = len(parents) * entry_cost + frontier.nbytes
            if estimate > self.memory_budget:
                raise MemoryBudgetExceededError(
                    f"Orbit of a negated-root set in W({self.system.diagram})", estimate, self.memory_budget
                )
            LOGGER.debug("Orbit depth %d: frontier %d, total %d", depth, len(frontier), len(parents))
        LOGGER.info(
            "Orbit in %s (%s) has %d members (%.3fs)",
            self.system.diagram,
            self.spec,
            len(parents),
            time.perf_counter() - started,
        )
        if self.report_progress is not None:
            self.report_progress(f"orbit of size {len(parents)} explored")
        return parents, target is None

    def _class_keys(self, w: GroupElement) -> frozenset[bytes]:
        parents, _ = self._explore(negated_mask(w))
        return frozenset(parents)

    def _path(self, parents: dict[bytes, tuple[bytes, int] | None], key: bytes) -> tuple[int, ...]:
        steps: list[int] = []
        link = parents[key]
        while link is not None:
            key, move_index = link
            steps.append(move_index)
            link = parents[key]
        return tuple(reversed(steps))

    def conjugate(self, w: GroupElement, w2: GroupElement, *, witness: bool = False) -> ConjugacyResult:
        target = negated_key(w2)
        if not witness:
            known = self.known_class(w)
            if known is None:
                known = self.conjugacy_class(w)
            return ConjugacyResult(target in known)
        parents, found = self._explore(negated_mask(w), target=target, track=True)
        if not found:
            return ConjugacyResult(False)
        path = self._path(parents, target)
        x = identity(self.system)
        for move_index in path:
            x = compose(self._generators[move_index], x)
        return ConjugacyResult(
            True,
            witness=reduced_word(self.system, x),
            path=tuple(index + 1 for index in path),
        )
