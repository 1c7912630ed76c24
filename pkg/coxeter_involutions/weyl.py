"""Weyl group elements as permutations of root indices.

An element ``w`` is stored as the array ``perm`` with ``perm[i]`` the index
of ``w(root_i)``; composition follows maps, so ``(u·v)(α) = u(v(α))`` and
``compose(u, v).perm == u.perm[v.perm]``. Tables of many elements are 2-D
arrays with one permutation per row.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .algebra import ExactMatrix, ScalarKind, canonical, exact_div, trace
from .errors import CapExceededError, PreconditionError
from .rootsys import (
    NodePermutation,
    NodeSet,
    RootSystem,
    automorphism_root_permutation,
    format_permutation,
    group_order,
    is_identity_permutation,
    neg_w0_node_permutation,
    node_orbits,
    node_set,
    validate_automorphism,
)


LOGGER = logging.getLogger(__name__)

DEFAULT_CAP = 200_000


class GroupElement:
    """An element of W(R), represented by its action on the roots of R."""

    def __init__(self, system: RootSystem, perm: Sequence[int] | np.ndarray) -> None:
        array = np.array(perm, dtype=system.perm_dtype)
        if array.shape != (system.num_roots,):
            raise ValueError(
                f"Permutation of length {array.shape} does not match {system.num_roots} roots."
            )
        array.setflags(write=False)
        self.system = system
        self.perm = array

    def __repr__(self) -> str:
        return f"GroupElement({self.system.diagram}, length={self.length})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.system is other.system and np.array_equal(self.perm, other.perm)

    def __hash__(self) -> int:
        return hash(self.perm.tobytes())

    def __call__(self, root: int) -> int:
        return int(self.perm[root])

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return compose(self, other)

    @cached_property
    def length(self) -> int:
        """Number of positive roots sent to negative roots."""

        positive = self.system.positive
        return int(np.count_nonzero(positive & ~positive[self.perm]))

    @cached_property
    def is_involution(self) -> bool:
        return bool(np.array_equal(self.perm[self.perm], np.arange(self.system.num_roots)))

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.perm, np.arange(self.system.num_roots)))

    def order(self) -> int:
        identity_perm = np.arange(self.system.num_roots)
        power = self.perm
        count = 1
        while not np.array_equal(power, identity_perm):
            power = self.perm[power]
            count += 1
        return count


def _same_system(u: GroupElement, v: GroupElement) -> RootSystem:
    if u.system is not v.system:
        raise PreconditionError("Elements belong to different root systems.")
    return u.system


def identity(R: RootSystem) -> GroupElement:
    return GroupElement(R, np.arange(R.num_roots))


def simple_reflection(R: RootSystem, node: int) -> GroupElement:
    return GroupElement(R, R.simple_reflection_permutation(node))


def word_eval(R: RootSystem, word: Iterable[int]) -> GroupElement:
    perm = np.arange(R.num_roots)
    for node in word:
        perm = perm[R.simple_reflection_permutation(int(node))]
    return GroupElement(R, perm)


def compose(u: GroupElement, v: GroupElement) -> GroupElement:
    R = _same_system(u, v)
    return GroupElement(R, u.perm[v.perm])


def inverse(u: GroupElement) -> GroupElement:
    return GroupElement(u.system, np.argsort(u.perm))


def conjugate_by(x: GroupElement, w: GroupElement) -> GroupElement:
    """x · w · x⁻¹."""

    return compose(compose(x, w), inverse(x))


def matrix_of(R: RootSystem, w: GroupElement) -> ExactMatrix:
    """Matrix of ``w`` in the simple-root basis; column i holds w(alpha_i)."""

    if R.is_planar:
        raise PreconditionError(f"{R.diagram} has no exact vector realisation.")
    columns = [R.roots[int(w.perm[root])] for root in R.simple]
    return ExactMatrix.from_columns(columns, R.kind)


def reduced_word(R: RootSystem, w: GroupElement) -> tuple[int, ...]:
    """A reduced word for ``w`` by repeatedly peeling off a right descent."""

    perm = w.perm
    peeled: list[int] = []
    while True:
        for node, root in enumerate(R.simple, start=1):
            if not R.positive[perm[root]]:
                perm = perm[R.simple_reflection_permutation(node)]
                peeled.append(node)
                break
        else:
            return tuple(reversed(peeled))


def _greedy_longest(R: RootSystem, nodes: NodeSet) -> np.ndarray:
    perm = np.arange(R.num_roots)
    while True:
        for node in nodes:
            if R.positive[perm[R.simple[node - 1]]]:
                perm = perm[R.simple_reflection_permutation(node)]
                break
        else:
            return perm


@lru_cache(maxsize=None)
def longest_element(R: RootSystem) -> GroupElement:
    """The unique element sending every positive root to a negative root.

    Greedy ascent: while some simple root is still sent to a positive root,
    multiply by its reflection on the right.
    """

    perm = _greedy_longest(R, tuple(range(1, R.rank + 1)))
    if R.positive[perm[R.positive_indices]].any():
        raise RuntimeError(f"Greedy descent for {R.diagram} stopped before negating every positive root.")
    return GroupElement(R, perm)


def longest_parabolic(R: RootSystem, nodes: Iterable[int]) -> GroupElement:
    chosen = node_set(nodes)
    for node in chosen:
        if not 1 <= node <= R.rank:
            raise PreconditionError(f"Node {node} outside 1..{R.rank}.")
    return GroupElement(R, _greedy_longest(R, chosen))


def is_minus_one(w: GroupElement) -> bool:
    return bool(np.array_equal(w.perm, w.system.negation))


def is_central(R: RootSystem, w: GroupElement) -> bool:
    for node in range(1, R.rank + 1):
        s = R.simple_reflection_permutation(node)
        if not np.array_equal(w.perm[s], s[w.perm]):
            return False
    return True


def negated_mask(w: GroupElement) -> np.ndarray:
    return w.perm == w.system.negation


def negated_roots(w: GroupElement) -> frozenset[int]:
    return frozenset(int(i) for i in np.flatnonzero(negated_mask(w)))


def negated_key(w: GroupElement) -> bytes:
    """Packed bitmask of the negated-root set; determines an involution."""

    return np.packbits(negated_mask(w)).tobytes()


def dim_minus(w: GroupElement) -> int:
    if not w.is_involution:
        raise PreconditionError("dim_minus is only defined for involutions.")
    return w.system.span_rank(negated_roots(w))


def dim_minus_by_trace(w: GroupElement) -> int:
    if not w.is_involution:
        raise PreconditionError("dim_minus is only defined for involutions.")
    R = w.system
    value = canonical(exact_div(R.rank - trace(matrix_of(R, w)), 2), ScalarKind.RATIONAL)
    return int(value)


# -- enumeration -----------------------------------------------------------------


class ElementTable:
    """A set of group elements stored as rows of a 2-D permutation array."""

    def __init__(self, system: RootSystem, rows: np.ndarray) -> None:
        rows.setflags(write=False)
        self.system = system
        self.rows = rows
        self._keys: set[bytes] | None = None

    def __len__(self) -> int:
        return int(self.rows.shape[0])

    def __iter__(self) -> Iterator[GroupElement]:
        for row in self.rows:
            yield GroupElement(self.system, row)

    def __getitem__(self, index: int) -> GroupElement:
        return GroupElement(self.system, self.rows[index])

    def __contains__(self, w: object) -> bool:
        if not isinstance(w, GroupElement) or w.system is not self.system:
            return False
        if self._keys is None:
            simple = np.asarray(self.system.simple)
            self._keys = {row.tobytes() for row in np.ascontiguousarray(self.rows[:, simple])}
        return w.perm[list(self.system.simple)].tobytes() in self._keys

    def chunks(self, size: int = 65_536) -> Iterator[np.ndarray]:
        for start in range(0, len(self), size):
            yield self.rows[start : start + size]

    def involution_mask(self) -> np.ndarray:
        identity_row = np.arange(self.system.num_roots)
        masks = [
            np.all(np.take_along_axis(block, block, axis=1) == identity_row, axis=1)
            for block in self.chunks()
        ]
        return np.concatenate(masks) if masks else np.zeros(0, dtype=bool)

    def involutions(self) -> list[GroupElement]:
        return [GroupElement(self.system, row) for row in self.rows[self.involution_mask()]]


def enumerate_group(
    R: RootSystem, cap: int = DEFAULT_CAP, report_progress=None
) -> ElementTable:
    """All elements of W(R), generated level by level in the length.

    Each element u of length L+1 is produced exactly once, from u·s where s
    is the smallest right descent of u, so no visited set is needed.
    """

    if cap <= 0:
        raise ValueError("cap must be positive")
    if R.diagram is not None and group_order(R.diagram) > cap:
        raise CapExceededError(f"W({R.diagram}) of order {group_order(R.diagram)}", cap)
    started = time.perf_counter()
    simple = np.asarray(R.simple)
    generators = [R.simple_reflection_permutation(node) for node in range(1, R.rank + 1)]
    level = np.arange(R.num_roots, dtype=R.perm_dtype)[None, :]
    levels = [level]
    total = 1
    length = 0
    while len(level):
        images_positive = R.positive[level[:, simple]]
        found = []
        for s, generator in enumerate(generators):
            ascending = level[images_positive[:, s]]
            if not len(ascending):
                continue
            candidates = ascending[:, generator]
            if s:
                minimal = R.positive[candidates[:, simple[:s]]].all(axis=1)
                candidates = candidates[minimal]
            found.append(candidates)
        level = np.concatenate(found) if found else level[:0]
        length += 1
        total += len(level)
        if total > cap:
            raise CapExceededError(f"W({R.diagram})", cap)
        if len(level):
            levels.append(level)
            LOGGER.debug("Length %d: %d elements", length, len(level))
            if report_progress is not None:
                report_progress(f"length {length}: {total} elements so far")
    table = ElementTable(R, np.concatenate(levels))
    LOGGER.info(
        "Enumerated W(%s): %d elements in %.3fs", R.diagram, len(table), time.perf_counter() - started
    )
    return table


def closure(
    R: RootSystem, generators: Sequence[GroupElement], cap: int = DEFAULT_CAP, report_progress=None
) -> ElementTable:
    """Breadth-first closure of the identity under right multiplication by ``generators``."""

    started = time.perf_counter()
    simple = np.asarray(R.simple)
    start = np.arange(R.num_roots, dtype=R.perm_dtype)
    seen = start[None, simple]
    frontier = start[None, :]
    layers = [frontier]
    total = 1
    while len(frontier):
        candidates = np.concatenate([frontier[:, g.perm] for g in generators])
        # first occurrences that were not seen before, in candidate order
        known = len(seen)
        seen, first = np.unique(np.concatenate([seen, candidates[:, simple]]), axis=0, return_index=True)
        fresh = np.sort(first[first >= known]) - known
        frontier = candidates[fresh]
        total += len(frontier)
        if total > cap:
            raise CapExceededError(f"Subgroup of W({R.diagram})", cap)
        if len(frontier):
            layers.append(frontier)
            if report_progress is not None:
                report_progress(f"{total} elements so far")
    table = ElementTable(R, np.concatenate(layers))
    LOGGER.info(
        "Closed %d generators in W(%s): %d elements in %.3fs",
        len(generators),
        R.diagram,
        len(table),
        time.perf_counter() - started,
    )
    return table


# -- subgroups -------------------------------------------------------------------

FULL = "full"
CENTRALIZER = "centralizer_of_w0"
SIGMA_FIXED = "sigma_fixed"

_SPEC_ALIASES = {
    "full": FULL,
    "w": FULL,
    "wo": CENTRALIZER,
    "w_o": CENTRALIZER,
    "centralizer": CENTRALIZER,
    CENTRALIZER: CENTRALIZER,
    "sigma": SIGMA_FIXED,
    SIGMA_FIXED: SIGMA_FIXED,
}

_SPEC_LABELS = {FULL: "full", CENTRALIZER: "wo", SIGMA_FIXED: "sigma"}


@dataclass(frozen=True)
class SubgroupSpec:
    """Which subgroup of W to work in: W itself, W_o, or the σ-fixed subgroup."""

    kind: str = FULL
    sigma: NodePermutation | None = field(default=None)

    def __post_init__(self) -> None:
        try:
            kind = _SPEC_ALIASES[self.kind.lower()]
        except KeyError as exc:
            available = ", ".join(sorted(_SPEC_LABELS.values()))
            raise ValueError(f"Unknown subgroup '{self.kind}'. Available subgroups: {available}") from exc
        object.__setattr__(self, "kind", kind)
        if kind == SIGMA_FIXED:
            if self.sigma is None:
                raise ValueError("The sigma-fixed subgroup needs a node permutation.")
            object.__setattr__(self, "sigma", tuple(int(i) for i in self.sigma))
        elif self.sigma is not None:
            raise ValueError(f"Subgroup '{kind}' does not take a node permutation.")

    @classmethod
    def full(cls) -> "SubgroupSpec":
        return cls(FULL)

    @classmethod
    def centralizer(cls) -> "SubgroupSpec":
        return cls(CENTRALIZER)

    @classmethod
    def sigma_fixed(cls, sigma: Sequence[int]) -> "SubgroupSpec":
        return cls(SIGMA_FIXED, tuple(sigma))

    @property
    def label(self) -> str:
        return _SPEC_LABELS[self.kind]

    def __str__(self) -> str:
        if self.kind == SIGMA_FIXED:
            return f"sigma[{format_permutation(self.sigma)}]"
        return self.label


@lru_cache(maxsize=None)
def spec_sigma(R: RootSystem, spec: SubgroupSpec) -> NodePermutation:
    """The node automorphism whose fixed subgroup ``spec`` describes."""

    if spec.kind == FULL:
        return tuple(range(1, R.rank + 1))
    if spec.kind == CENTRALIZER:
        return neg_w0_node_permutation(R, longest_element(R))
    return validate_automorphism(R, spec.sigma)


@lru_cache(maxsize=None)
def sigma_root_permutation(R: RootSystem, sigma: NodePermutation) -> np.ndarray:
    return automorphism_root_permutation(R, sigma)


@lru_cache(maxsize=None)
def subgroup_generators(R: RootSystem, spec: SubgroupSpec) -> tuple[GroupElement, ...]:
    """Simple reflections, or one longest parabolic element per node orbit of σ."""

    sigma = spec_sigma(R, spec)
    if is_identity_permutation(sigma):
        return tuple(simple_reflection(R, node) for node in range(1, R.rank + 1))
    return tuple(longest_parabolic(R, orbit) for orbit in node_orbits(sigma))


def in_subgroup(w: GroupElement, spec: SubgroupSpec) -> bool:
    R = w.system
    if spec.kind == FULL:
        return True
    if spec.kind == CENTRALIZER:
        w0 = longest_element(R)
        return compose(w, w0) == compose(w0, w)
    sigma = sigma_root_permutation(R, spec_sigma(R, spec))
    # σ is an involution on roots for order-2 automorphisms; use the inverse in general
    return bool(np.array_equal(sigma[w.perm[np.argsort(sigma)]], w.perm))


def subgroup_order_bound(R: RootSystem, spec: SubgroupSpec) -> int:
    """Order of the subgroup when known in closed form, else |W| as an upper bound."""

    if R.diagram is None:
        raise PreconditionError("Subgroup order needs a named diagram type.")
    order = group_order(R.diagram)
    sigma = spec_sigma(R, spec)
    if is_identity_permutation(sigma):
        return order
    from .folding import fold

    if all(sigma[sigma[i] - 1] == i + 1 for i in range(R.rank)):
        return group_order(fold(R, sigma).folded.diagram)
    return order


@lru_cache(maxsize=4)
def enumerate_subgroup(R: RootSystem, spec: SubgroupSpec, cap: int = DEFAULT_CAP) -> ElementTable:
    if is_identity_permutation(spec_sigma(R, spec)):
        return enumerate_group(R, cap)
    return closure(R, subgroup_generators(R, spec), cap)


@dataclass(frozen=True)
class ConjugacyResult:
    """Outcome of a conjugacy test; ``witness`` is a simple word for x with x·w·x⁻¹ = w'."""

    conjugate: bool
    witness: tuple[int, ...] | None = None
    path: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.conjugate


def conjugate_in(
    w: GroupElement,
    w2: GroupElement,
    spec: SubgroupSpec,
    mode: str = "neg_orbit",
    *,
    witness: bool = False,
    cap: int = DEFAULT_CAP,
    memory_budget: int | None = None,
) -> ConjugacyResult:
    """Decide whether two involutions of the subgroup are conjugate inside it."""

    from .oracles import get_oracle, resolve_mode

    R = _same_system(w, w2)
    for element in (w, w2):
        if not element.is_involution:
            raise PreconditionError("conjugate_in expects involutions.")
        if not in_subgroup(element, spec):
            raise PreconditionError(f"Element does not lie in the {spec} subgroup.")
    oracle_cls = get_oracle(resolve_mode(R, spec, mode, cap))
    kwargs = {"cap": cap}
    if memory_budget is not None:
        kwargs["memory_budget"] = memory_budget
    oracle = oracle_cls(R, spec, **kwargs)
    return oracle.conjugate(w, w2, witness=witness)


# -- dihedral closed form --------------------------------------------------------


@dataclass(frozen=True)
class DihedralElement:
    """Symbolic element of the dihedral group of order 2n.

    ``rotation k`` turns the plane by 2πk/n; ``reflection j`` is the
    reflection in the root at angle jπ/n (so j and j+n agree).
    """

    n: int
    reflection: bool
    index: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "index", self.index % self.n)

    def __mul__(self, other: "DihedralElement") -> "DihedralElement":
        if other.n != self.n:
            raise PreconditionError("Dihedral elements of different orders.")
        a, b = self.index, other.index
        if not self.reflection and not other.reflection:
            return DihedralElement(self.n, False, a + b)
        if not self.reflection:
            return DihedralElement(self.n, True, b + a)
        if not other.reflection:
            return DihedralElement(self.n, True, a - b)
        return DihedralElement(self.n, False, a - b)

    def inverse(self) -> "DihedralElement":
        if self.reflection:
            return self
        return DihedralElement(self.n, False, -self.index)

    @property
    def is_involution(self) -> bool:
        return self.reflection or (2 * self.index) % self.n == 0

    def to_permutation(self) -> np.ndarray:
        count = 2 * self.n
        roots = np.arange(count)
        if self.reflection:
            return (2 * self.index + self.n - roots) % count
        return (roots + 2 * self.index) % count

    def __str__(self) -> str:
        return f"{'s' if self.reflection else 'r'}{self.index}"


def dihedral_elements(n: int) -> list[DihedralElement]:
    return [DihedralElement(n, False, k) for k in range(n)] + [
        DihedralElement(n, True, k) for k in range(n)
    ]


def dihedral_simple(n: int, node: int) -> DihedralElement:
    if node not in (1, 2):
        raise PreconditionError(f"Dihedral groups have nodes 1 and 2, got {node}.")
    return DihedralElement(n, True, 0 if node == 1 else n - 1)


def dihedral_longest(n: int) -> DihedralElement:
    if n % 2 == 0:
        return DihedralElement(n, False, n // 2)
    return DihedralElement(n, True, (n - 1) // 2)


def dihedral_reflections_conjugate(n: int, j: int, k: int) -> bool:
    """Closed form: all mirrors are conjugate for odd n, mirrors of equal parity for even n."""

    if n % 2:
        return True
    return (j - k) % 2 == 0


def dihedral_conjugate(a: DihedralElement, b: DihedralElement) -> bool:
    if a.reflection != b.reflection:
        return False
    if a.reflection:
        return dihedral_reflections_conjugate(a.n, a.index, b.index)
    return a.index == b.index or (a.index + b.index) % a.n == 0


def dihedral_conjugate_by_search(a: DihedralElement, b: DihedralElement) -> bool:
    return any(x * a * x.inverse() == b for x in dihedral_elements(a.n))


def dihedral_to_element(R: RootSystem, e: DihedralElement) -> GroupElement:
    if R.planar_n != e.n:
        raise PreconditionError(f"{e} does not act on {R.diagram}.")
    return GroupElement(R, e.to_permutation())


__all__ = [
    "CENTRALIZER",
    "ConjugacyResult",
    "DEFAULT_CAP",
    "DihedralElement",
    "ElementTable",
    "FULL",
    "GroupElement",
    "SIGMA_FIXED",
    "SubgroupSpec",
    "closure",
    "compose",
    "conjugate_by",
    "conjugate_in",
    "dihedral_conjugate",
    "dihedral_conjugate_by_search",
    "dihedral_elements",
    "dihedral_longest",
    "dihedral_reflections_conjugate",
    "dihedral_simple",
    "dihedral_to_element",
    "dim_minus",
    "dim_minus_by_trace",
    "enumerate_group",
    "enumerate_subgroup",
    "identity",
    "in_subgroup",
    "inverse",
    "is_central",
    "is_minus_one",
    "longest_element",
    "longest_parabolic",
    "matrix_of",
    "negated_key",
    "negated_mask",
    "negated_roots",
    "reduced_word",
    "sigma_root_permutation",
    "simple_reflection",
    "spec_sigma",
    "subgroup_generators",
    "subgroup_order_bound",
    "word_eval",
]
