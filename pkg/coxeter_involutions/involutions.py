"""Involutions: standard subsets, eigenspace invariants, classification and the w_o pairing."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Iterable, Iterator, Sequence

import numpy as np

from .algebra import ExactMatrix, ScalarKind, dot, rank
from .errors import ClassificationIncomplete, PreconditionError
from .oracles import DEFAULT_MEMORY_BUDGET, ConjugacyOracle, ProgressReporter, get_oracle, resolve_mode
from .rootsys import (
    DiagramType,
    NodePermutation,
    NodeSet,
    RootSystem,
    SubsystemType,
    canonical_order,
    classify_subsystem,
    format_nodes,
    format_types,
    identify_nodes,
    neg_w0_node_permutation,
    node_orbits,
    node_set,
    subsystem_in_subspace,
    validate_automorphism,
)
from .weyl import (
    DEFAULT_CAP,
    FULL,
    GroupElement,
    SubgroupSpec,
    compose,
    dim_minus,
    in_subgroup,
    is_central,
    longest_element,
    longest_parabolic,
    matrix_of,
    negated_key,
    negated_roots,
    spec_sigma,
)


LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class InvolutionClass:
    """A conjugacy class of involutions together with its eigenspace invariants."""

    representative: GroupElement
    subsets: tuple[NodeSet, ...]
    dim_minus: int
    dim_plus: int
    neg_type: tuple[SubsystemType, ...]
    plus_type: tuple[SubsystemType, ...]
    size: int

    @property
    def canonical_subset(self) -> NodeSet:
        return self.subsets[0]

    @property
    def invariants(self) -> tuple[int, tuple[SubsystemType, ...]]:
        return (self.dim_minus, self.neg_type)

    def describe(self) -> str:
        reps = ";".join(format_nodes(subset) for subset in self.subsets)
        return (
            f"dim-={self.dim_minus} dim+={self.dim_plus} "
            f"neg={format_types(self.neg_type)} plus={format_types(self.plus_type)} reps={reps}"
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "reps": [list(subset) for subset in self.subsets],
            "dim_minus": self.dim_minus,
            "neg_type": [str(item) for item in self.neg_type],
        }


# -- subsets and orbit counting ----------------------------------------------------


def all_subsets(n: int) -> list[NodeSet]:
    """Every subset of the nodes 1..n in canonical order (by size, then lexicographic)."""

    nodes = range(1, n + 1)
    return [subset for size in range(n + 1) for subset in combinations(nodes, size)]


def is_invariant(nodes: NodeSet, sigma: Sequence[int]) -> bool:
    return all(sigma[node - 1] in nodes for node in nodes)


def standard_subsets(R: RootSystem) -> list[NodeSet]:
    """All I for which w_I acts as -1 on the span of I."""

    return [subset for subset in all_subsets(R.rank) if dim_minus(longest_parabolic(R, subset)) == len(subset)]


def node_action_of_longest(R: RootSystem, nodes: Iterable[int]) -> dict[int, int]:
    """The permutation i -> j of I with -w_I(alpha_i) = alpha_j."""

    chosen = node_set(nodes)
    w = longest_parabolic(R, chosen)
    position = {R.simple[node - 1]: node for node in chosen}
    action = {}
    for node in chosen:
        target = int(R.negation[int(w.perm[R.simple[node - 1]])])
        if target not in position:
            raise RuntimeError(f"-w_I does not permute the simple roots of {format_nodes(chosen)}.")
        action[node] = position[target]
    return action


def _cycle_lengths(action: dict[int, int]) -> list[int]:
    seen: set[int] = set()
    lengths = []
    for start in action:
        if start in seen:
            continue
        size = 0
        current = start
        while current not in seen:
            seen.add(current)
            current = action[current]
            size += 1
        lengths.append(size)
    return lengths


def _orbit_count(action: dict[int, int]) -> int:
    return len(_cycle_lengths(action))


def _two_sided_count(R: RootSystem, chosen: NodeSet, action: dict[int, int], sigma: Sequence[int]) -> int:
    # a cycle of the permutation sigma.pi contributes a -1 eigenvalue iff its length is even
    composite = {node: sigma[action[node] - 1] for node in chosen}
    even = sum(1 for size in _cycle_lengths(composite) if size % 2 == 0)
    outside = [orbit for orbit in node_orbits(sigma) if not set(orbit) & set(chosen)]
    return even + len(outside)


def _permutation_matrix(sigma: Sequence[int], kind: ScalarKind) -> ExactMatrix:
    n = len(sigma)
    rows = [[0] * n for _ in range(n)]
    for node, image in enumerate(sigma, start=1):
        rows[image - 1][node - 1] = 1
    return ExactMatrix(rows, kind)


def sigma_dim_minus(R: RootSystem, sigma: Sequence[int], nodes: Iterable[int]) -> int:
    """Dimension of the -1-eigenspace of σ·(-w_I), by exact rank."""

    if R.is_planar:
        raise PreconditionError(f"{R.diagram} has no exact vector realisation.")
    chosen = node_set(nodes)
    operator = -(_permutation_matrix(sigma, R.kind) @ matrix_of(R, longest_parabolic(R, chosen)))
    return R.rank - rank(operator + ExactMatrix.identity(R.rank, R.kind))


def dim_minus_orbits(
    R: RootSystem, nodes: Iterable[int], variant: int, sigma: Sequence[int] | None = None
) -> int:
    """Eigenspace dimensions by counting node orbits.

    * variant 1: orbits of -w_I on I, giving dim^-(w_I);
    * variant 2: non-trivial orbits of w_o·w_I on I plus orbits of -w_o on
      the remaining nodes, giving dim^-(w_o·w_I); needs -w_o(I) = I;
    * variant 3: the same count with -w_o replaced by an automorphism σ;
      needs σ(I) = I and σ commuting with -w_I on I. For σ of order three
      only the even cycles of σ·(-w_I) on I count.
    """

    chosen = node_set(nodes)
    for node in chosen:
        if not 1 <= node <= R.rank:
            raise PreconditionError(f"Node {node} outside 1..{R.rank}.")
    action = node_action_of_longest(R, chosen)
    if variant == 1:
        return _orbit_count(action)
    if variant == 2:
        neg_w0 = neg_w0_node_permutation(R, longest_element(R))
        if not is_invariant(chosen, neg_w0):
            raise PreconditionError(f"-w_o does not preserve {format_nodes(chosen)}.")
        return _two_sided_count(R, chosen, action, neg_w0)
    if variant == 3:
        if sigma is None:
            raise PreconditionError("Variant 3 needs an automorphism sigma.")
        sigma = validate_automorphism(R, sigma)
        if not is_invariant(chosen, sigma):
            raise PreconditionError(f"sigma does not preserve {format_nodes(chosen)}.")
        if any(sigma[action[node] - 1] != action[sigma[node - 1]] for node in chosen):
            raise PreconditionError(f"sigma and -w_I do not commute on {format_nodes(chosen)}.")
        if not R.is_planar:
            permutation = _permutation_matrix(sigma, R.kind)
            w_matrix = matrix_of(R, longest_parabolic(R, chosen))
            if permutation @ w_matrix != w_matrix @ permutation:
                raise PreconditionError(f"sigma and -w_I do not commute on V for {format_nodes(chosen)}.")
        return _two_sided_count(R, chosen, action, sigma)
    raise ValueError(f"Unknown variant {variant}; expected 1, 2 or 3.")


# -- reductions and eigenspaces ------------------------------------------------------


def _reduce_component(diagram: DiagramType, order: NodeSet) -> NodeSet:
    if diagram.has_central_longest:
        return order
    if diagram.series == "A":
        return order[0::2]
    if diagram.series == "D":
        return order[1:]
    if diagram.series == "E":
        return order[1:5]
    if diagram.series == "G":
        return order[:1]
    raise RuntimeError(f"No reduction known for {diagram}.")


def reduce_to_standard(R: RootSystem, nodes: Iterable[int]) -> NodeSet:
    """A standard I ⊆ H with c_I conjugate to w_H, componentwise."""

    reduced: list[int] = []
    for diagram, order in identify_nodes(R, nodes):
        reduced.extend(_reduce_component(diagram, order))
    return node_set(reduced)


def _planar_perpendicular(R: RootSystem, negated: frozenset[int]) -> frozenset[int]:
    n = R.planar_n
    lines = {i % n for i in negated}
    if not lines:
        return R.all_roots
    if len(lines) > 1 or n % 2:
        return frozenset()
    (line,) = lines
    other = (line + n // 2) % n
    return frozenset({other, other + n})


def eigen_roots(R: RootSystem, w: GroupElement) -> tuple[frozenset[int], frozenset[int]]:
    """Roots in the +1- and -1-eigenspaces of the involution ``w``."""

    if not w.is_involution:
        raise PreconditionError("eigen_subsystems expects an involution.")
    negated = negated_roots(w)
    if R.is_planar:
        return _planar_perpendicular(R, negated), R.span_closure(negated)
    basis: list[tuple] = []
    for index in sorted(negated):
        candidate = basis + [R.roots[index]]
        if rank(ExactMatrix(candidate, R.kind)) > len(basis):
            basis = candidate
    minus = subsystem_in_subspace(R, basis)
    applied = [tuple(dot(row, vector) for row in R.gram.rows) for vector in basis]
    plus = frozenset(
        i for i, root in enumerate(R.roots) if all(not dot(root, column) for column in applied)
    )
    return plus, minus


def eigen_subsystems(
    R: RootSystem, w: GroupElement
) -> tuple[tuple[SubsystemType, ...], tuple[SubsystemType, ...]]:
    """(plus_type, neg_type) of the full sub-root systems in the two eigenspaces."""

    plus, minus = eigen_roots(R, w)
    return classify_subsystem(R, plus), classify_subsystem(R, minus)


def observation_types(
    R: RootSystem, nodes: Iterable[int]
) -> tuple[tuple[DiagramType, ...], tuple[DiagramType, ...]]:
    """Types of the subdiagram I and of the nodes neither in I nor adjacent to it."""

    chosen = node_set(nodes)
    far = [
        node
        for node in range(1, R.rank + 1)
        if node not in chosen and not set(R.neighbours(node)) & set(chosen)
    ]
    inside = tuple(diagram for diagram, _ in identify_nodes(R, chosen))
    outside = tuple(diagram for diagram, _ in identify_nodes(R, far))
    return inside, outside


# -- classical patterns --------------------------------------------------------------

A_EVEN = "A_even"
A_ODD = "A_odd"
BC = "BC"
D_FAMILY = "D"
SPIN = "spin"
FAMILIES = (A_EVEN, A_ODD, BC, D_FAMILY, SPIN)


@dataclass(frozen=True)
class PatternKey:
    """Index of the classical involutions c_{k,l}, or of the spin involutions c-/c+.

    ``n`` is the family parameter: A_{2n}, A_{2n-1}, BC_n, D_{n+1}; for the
    spin family it is the half-rank m of D_{2m}.
    """

    family: str
    n: int
    k: int = 0
    l: int = 0
    spin: str | None = None

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise PreconditionError(f"Unknown pattern family '{self.family}'.")
        if self.family == SPIN:
            if self.spin not in ("-", "+"):
                raise PreconditionError("Spin patterns are c- or c+.")
            if self.n < 2:
                raise PreconditionError("Spin patterns need D_{2m} with m >= 2.")
            return
        minimum = {A_EVEN: 1, A_ODD: 1, BC: 2, D_FAMILY: 3}[self.family]
        if self.n < minimum:
            raise PreconditionError(f"Family {self.family} needs n >= {minimum}.")
        if not 0 <= self.l <= self.n or not 0 <= self.k <= (self.n - self.l) // 2:
            raise PreconditionError(f"(k, l) = ({self.k}, {self.l}) is not a valid index for n = {self.n}.")

    @property
    def diagram(self) -> DiagramType:
        if self.family == A_EVEN:
            return DiagramType("A", 2 * self.n)
        if self.family == A_ODD:
            return DiagramType("A", 2 * self.n - 1)
        if self.family == BC:
            return DiagramType("C", self.n)
        if self.family == D_FAMILY:
            return DiagramType("D", self.n + 1)
        return DiagramType("D", 2 * self.n)

    def __str__(self) -> str:
        if self.family == SPIN:
            return f"c{self.spin}"
        return f"c_{{{self.k},{self.l}}}"


def pattern_keys(family: str, n: int) -> list[PatternKey]:
    """Every valid c_{k,l} of a family, ordered by l then k."""

    return [PatternKey(family, n, k, l) for l in range(n + 1) for k in range((n - l) // 2 + 1)]


def pattern_nodes(key: PatternKey) -> NodeSet:
    n, k, l = key.n, key.k, key.l
    if key.family == SPIN:
        base = list(range(1, 2 * key.n - 2, 2))
        return node_set(base + [2 * key.n - 1 if key.spin == "-" else 2 * key.n])
    left = list(range(1, 2 * k, 2))
    if key.family == A_EVEN:
        right = [2 * n - 2 * j for j in range(k)]
        block = list(range(n - l + 1, n + l + 1))
        return node_set(left + right + block)
    if key.family == A_ODD:
        right = [2 * n - 1 - 2 * j for j in range(k)]
        block = list(range(n - l + 1, n + l)) if l >= 1 else []
        return node_set(left + right + block)
    if key.family == BC:
        return node_set(left + list(range(n - l + 1, n + 1)))
    tail = list(range(n + 1 - l, n + 2)) if l >= 1 else []
    return node_set(left + tail)


def dagger_prediction(n: int, k: int, l: int) -> tuple[int, int]:
    """The index (k, n-2k-l) paired with (k, l) by multiplication with w_o."""

    if not 0 <= l <= n or not 0 <= k <= (n - l) // 2:
        raise PreconditionError(f"(k, l) = ({k}, {l}) is not a valid index for n = {n}.")
    return (k, n - 2 * k - l)


# -- classification ------------------------------------------------------------------


def candidate_subsets(R: RootSystem, spec: SubgroupSpec) -> list[NodeSet]:
    sigma = spec_sigma(R, spec)
    return [subset for subset in all_subsets(R.rank) if is_invariant(subset, sigma)]


class Classification(Sequence[InvolutionClass]):
    """The involution classes of one subgroup, with the oracle that separated them."""

    def __init__(
        self,
        system: RootSystem,
        spec: SubgroupSpec,
        classes: Sequence[InvolutionClass],
        oracle: ConjugacyOracle,
    ) -> None:
        self.system = system
        self.spec = spec
        self.classes = list(classes)
        self.oracle = oracle

    def __len__(self) -> int:
        return len(self.classes)

    def __getitem__(self, index):  # type: ignore[override]
        return self.classes[index]

    def __iter__(self) -> Iterator[InvolutionClass]:
        return iter(self.classes)

    @property
    def mode(self) -> str:
        return self.oracle.name

    def index_of(self, w: GroupElement, *, strict: bool = False) -> int:
        """Index of the class containing the involution ``w``.

        Invariants narrow the search; the oracle decides among colliding
        classes, or always when ``strict`` is set.
        """

        if not w.is_involution:
            raise PreconditionError("Only involutions belong to involution classes.")
        invariants = (dim_minus(w), classify_subsystem(self.system, negated_roots(w)))
        matches = [i for i, cls in enumerate(self.classes) if cls.invariants == invariants]
        if len(matches) == 1 and not strict:
            return matches[0]
        key = negated_key(w)
        for i in matches:
            if key in self.oracle.conjugacy_class(self.classes[i].representative):
                return i
        raise ClassificationIncomplete(
            f"No class of the {self.spec} subgroup of {self.system.diagram} contains the given involution."
        )

    def to_dict(self) -> list[dict[str, Any]]:
        return [cls.to_dict() for cls in self.classes]


def _split_bucket(
    oracle: ConjugacyOracle, elements: dict[NodeSet, GroupElement], bucket: list[NodeSet]
) -> list[list[NodeSet]]:
    groups: list[list[NodeSet]] = []
    for subset in bucket:
        key = negated_key(elements[subset])
        for group in groups:
            if key in oracle.conjugacy_class(elements[group[0]]):
                group.append(subset)
                break
        else:
            groups.append([subset])
            oracle.conjugacy_class(elements[subset])
    if len(groups) > 1:
        LOGGER.debug("Bucket of %d candidates split into %d classes", len(bucket), len(groups))
    return groups


def classify(
    R: RootSystem,
    spec: SubgroupSpec | None = None,
    mode: str = "neg_orbit",
    *,
    cap: int = DEFAULT_CAP,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
    threads: int = 1,
    report_progress: ProgressReporter | None = None,
) -> Classification:
    """Partition the involutions of the subgroup into conjugacy classes.

    Candidates are the w_I over σ-invariant I. They are bucketed by
    (dim^-, type of the negated roots) and split inside each bucket by the
    oracle. In exhaustive mode every involution of the enumerated subgroup
    must land in exactly one class.
    """

    spec = spec or SubgroupSpec.full()
    started = time.perf_counter()
    mode = resolve_mode(R, spec, mode, cap)
    oracle = get_oracle(mode)(R, spec, cap=cap, memory_budget=memory_budget, report_progress=report_progress)
    oracle.load(report_progress)

    candidates = candidate_subsets(R, spec)
    elements = {subset: longest_parabolic(R, subset) for subset in candidates}
    buckets: dict[tuple[int, tuple[SubsystemType, ...]], list[NodeSet]] = {}
    for subset in candidates:
        w = elements[subset]
        invariants = (dim_minus(w), classify_subsystem(R, negated_roots(w)))
        buckets.setdefault(invariants, []).append(subset)
    LOGGER.info("%s (%s): %d candidates in %d buckets", R.diagram, spec, len(candidates), len(buckets))

    ordered = list(buckets.items())

    def work(item):
        return _split_bucket(oracle, elements, item[1])

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(work, ordered))
    else:
        results = [work(item) for item in ordered]

    coverage = oracle.involution_keys() if oracle.name == "exhaustive" else None
    classes: list[InvolutionClass] = []
    for (invariants, _), groups in zip(ordered, results):
        for group in groups:
            representative = elements[group[0]]
            plus_type, neg_type = eigen_subsystems(R, representative)
            if neg_type != invariants[1]:
                raise RuntimeError(f"Negated roots of {format_nodes(group[0])} do not fill the -1-eigenspace.")
            members = oracle.conjugacy_class(representative)
            classes.append(
                InvolutionClass(
                    representative=representative,
                    subsets=tuple(group),
                    dim_minus=invariants[0],
                    dim_plus=R.rank - invariants[0],
                    neg_type=neg_type,
                    plus_type=plus_type,
                    size=len(members),
                )
            )
    classes.sort(key=lambda cls: (cls.dim_minus, canonical_order(cls.canonical_subset)))

    if coverage is not None:
        total = sum(cls.size for cls in classes)
        covered = frozenset().union(*(oracle.conjugacy_class(cls.representative) for cls in classes))
        if total != len(coverage) or covered != coverage:
            raise ClassificationIncomplete(
                f"Classes of {R.diagram} ({spec}) cover {total} involutions, the subgroup has {len(coverage)}."
            )

    LOGGER.info(
        "Classified %s (%s, %s): %d classes in %.3fs",
        R.diagram,
        spec,
        oracle.name,
        len(classes),
        time.perf_counter() - started,
    )
    return Classification(R, spec, classes, oracle)


def w0_pairing(
    classes: Classification | Sequence[InvolutionClass],
    R: RootSystem | None = None,
    spec: SubgroupSpec | None = None,
    mode: str = "neg_orbit",
    *,
    cap: int = DEFAULT_CAP,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> dict[int, int]:
    """Class index -> class index of w_o times the representative."""

    if not isinstance(classes, Classification):
        if R is None:
            raise PreconditionError("w0_pairing needs the root system when given a plain class list.")
        spec = spec or SubgroupSpec.full()
        oracle = get_oracle(resolve_mode(R, spec, mode, cap))(R, spec, cap=cap, memory_budget=memory_budget)
        oracle.load()
        classes = Classification(R, spec, classes, oracle)
    R = classes.system
    w0 = longest_element(R)
    if not in_subgroup(w0, classes.spec):
        raise PreconditionError(f"w_o does not lie in the {classes.spec} subgroup.")
    if classes.spec.kind == FULL and not is_central(R, w0):
        raise PreconditionError(f"w_o is not central in W({R.diagram}); pair inside W_o instead.")
    neg_w0 = neg_w0_node_permutation(R, w0)

    pairing: dict[int, int] = {}
    for index, cls in enumerate(classes):
        image = compose(w0, cls.representative)
        if not image.is_involution:
            raise PreconditionError("w_o does not commute with the class representative.")
        target = classes.index_of(image)
        pairing[index] = target
        subset = cls.canonical_subset
        if is_invariant(subset, neg_w0):
            expected = dim_minus_orbits(R, subset, 2)
            if classes[target].dim_minus != expected:
                raise RuntimeError(
                    f"Pairing of {format_nodes(subset)} lands in dimension {classes[target].dim_minus}, "
                    f"orbit count gives {expected}."
                )
    for source, target in pairing.items():
        if pairing[target] != source:
            raise ClassificationIncomplete("Multiplication by w_o does not act as an involution on classes.")
    return pairing


def maximal_class(classes: Sequence[InvolutionClass]) -> list[int]:
    """Indices of the classes of maximal dim^-."""

    top = max(cls.dim_minus for cls in classes)
    return [i for i, cls in enumerate(classes) if cls.dim_minus == top]


__all__ = [
    "A_EVEN",
    "A_ODD",
    "BC",
    "Classification",
    "D_FAMILY",
    "InvolutionClass",
    "PatternKey",
    "SPIN",
    "all_subsets",
    "candidate_subsets",
    "classify",
    "dagger_prediction",
    "dim_minus_orbits",
    "eigen_roots",
    "eigen_subsystems",
    "is_invariant",
    "maximal_class",
    "node_action_of_longest",
    "observation_types",
    "pattern_keys",
    "pattern_nodes",
    "reduce_to_standard",
    "sigma_dim_minus",
    "standard_subsets",
    "w0_pairing",
]
