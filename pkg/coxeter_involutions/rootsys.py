"""Finite root systems, Dynkin diagram types and diagram combinatorics.

Roots of crystallographic and H types are exact vectors in simple-root
coordinates; dihedral types ``G2(n)`` are realised abstractly as ``2n`` roots
indexed by angle (root ``k`` sits at angle ``k·π/n``). Nodes are numbered from
1 following Bourbaki.
"""

from __future__ import annotations

import logging
import re
import threading
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial, gcd
from typing import Iterable, Sequence

import networkx as nx
import numpy as np
from networkx.algorithms import isomorphism

from .algebra import (
    ExactMatrix,
    ExactVector,
    Golden,
    PHI,
    Scalar,
    ScalarKind,
    canonical,
    dot,
    exact_div,
    rank,
)
from .errors import DiagramTypeError, PreconditionError


LOGGER = logging.getLogger(__name__)

NodeSet = tuple[int, ...]
NodePermutation = tuple[int, ...]

_TYPE_PATTERN = re.compile(
    r"^\s*(BC|[A-I])_?(\d+)\s*(?:(?::|\()\s*(\d+)\s*\)?)?\s*$", re.IGNORECASE
)

_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 4}
_FIXED_RANKS = {"E": (6, 7, 8), "F": (4,), "G": (2,), "H": (3, 4)}

MAX_ROOTS = 100_000


def node_set(nodes: Iterable[int]) -> NodeSet:
    return tuple(sorted({int(node) for node in nodes}))


def format_nodes(nodes: Iterable[int]) -> str:
    return "{" + ",".join(str(node) for node in node_set(nodes)) + "}"


def parse_nodes(text: str) -> NodeSet:
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ValueError(f"Node set '{text}' must be written as {{i,j,...}}.")
    inner = body[1:-1].strip()
    if not inner:
        return ()
    return node_set(int(part) for part in inner.split(","))


def canonical_order(nodes: NodeSet) -> tuple[int, NodeSet]:
    """Sort key for node sets: by size, then lexicographically."""

    return (len(nodes), nodes)


@dataclass(frozen=True, order=True)
class DiagramType:
    """A finite irreducible Coxeter/Dynkin type such as ``E7`` or ``G2(8)``."""

    series: str
    rank: int
    gonality: int | None = None

    def __post_init__(self) -> None:
        if self.series in _MIN_RANK:
            if self.rank < _MIN_RANK[self.series]:
                raise DiagramTypeError(
                    f"Type {self.series} needs rank at least {_MIN_RANK[self.series]}, got {self.rank}."
                )
        elif self.series in _FIXED_RANKS:
            if self.rank not in _FIXED_RANKS[self.series]:
                allowed = ", ".join(str(r) for r in _FIXED_RANKS[self.series])
                raise DiagramTypeError(f"Type {self.series} exists only in rank {allowed}, got {self.rank}.")
        else:
            raise DiagramTypeError(f"Unknown series '{self.series}'.")
        if self.series == "G":
            if self.gonality is None or self.gonality < 2:
                raise DiagramTypeError("Dihedral types need a gonality n >= 2.")
        elif self.gonality is not None:
            raise DiagramTypeError(f"Only dihedral types carry a gonality, not {self.series}.")

    @classmethod
    def parse(cls, text: str, *, realization: str = "C") -> "DiagramType":
        """Parse ``E7``, ``BC5``, ``D6``, ``G2``, ``G2:8``, ``G2(8)`` or ``I2(8)``."""

        match = _TYPE_PATTERN.match(text)
        if match is None:
            raise DiagramTypeError(f"Cannot parse diagram type '{text}'.")
        series = match.group(1).upper()
        n = int(match.group(2))
        extra = match.group(3)
        if series == "BC":
            if realization.upper() not in ("B", "C"):
                raise DiagramTypeError(f"Realization must be B or C, got '{realization}'.")
            series = realization.upper()
        if series in ("G", "I"):
            if n != 2:
                raise DiagramTypeError(f"Dihedral types have rank 2, got '{text}'.")
            if extra is None:
                if series == "I":
                    raise DiagramTypeError("I2 needs an explicit gonality, e.g. I2(8).")
                return cls("G", 2, 6)
            return cls("G", 2, int(extra))
        if extra is not None:
            raise DiagramTypeError(f"Only dihedral types take a gonality: '{text}'.")
        return cls(series, n)

    def __str__(self) -> str:
        if self.series == "G":
            return "G2" if self.gonality == 6 else f"G2({self.gonality})"
        return f"{self.series}{self.rank}"

    @property
    def is_dihedral(self) -> bool:
        return self.series == "G"

    @property
    def coxeter_key(self) -> tuple[str, int, int | None]:
        """Key identifying the Coxeter graph, ignoring root lengths."""

        if self.series == "B":
            return ("C", self.rank, None)
        if self.series == "G":
            if self.gonality == 3:
                return ("A", 2, None)
            if self.gonality == 4:
                return ("C", 2, None)
        return (self.series, self.rank, self.gonality)

    @property
    def has_central_longest(self) -> bool:
        """Whether the longest element acts as -1."""

        if self.series == "A":
            return self.rank == 1
        if self.series == "D":
            return self.rank % 2 == 0
        if self.series == "E":
            return self.rank in (7, 8)
        if self.series == "G":
            return self.gonality % 2 == 0
        return True


def group_order(t: DiagramType) -> int:
    n = t.rank
    if t.series == "A":
        return factorial(n + 1)
    if t.series in ("B", "C"):
        return 2**n * factorial(n)
    if t.series == "D":
        return 2 ** (n - 1) * factorial(n)
    if t.series == "E":
        return {6: 51_840, 7: 2_903_040, 8: 696_729_600}[n]
    if t.series == "F":
        return 1152
    if t.series == "G":
        return 2 * t.gonality
    return {3: 120, 4: 14_400}[n]


@dataclass(frozen=True, order=True)
class SubsystemType:
    """An irreducible component of a sub-root system with its length label."""

    diagram: DiagramType
    length: str = ""

    @property
    def rank(self) -> int:
        return self.diagram.rank

    def __str__(self) -> str:
        return f"{self.diagram}({self.length})" if self.length else str(self.diagram)


def sort_types(types: Iterable[SubsystemType]) -> tuple[SubsystemType, ...]:
    return tuple(sorted(types, key=lambda item: (-item.rank, str(item))))


def format_types(types: Sequence[SubsystemType]) -> str:
    if not types:
        return "∅"
    parts: list[str] = []
    ordered = sort_types(types)
    i = 0
    while i < len(ordered):
        j = i
        while j < len(ordered) and ordered[j] == ordered[i]:
            j += 1
        count = j - i
        parts.append(f"{count}{ordered[i]}" if count > 1 else str(ordered[i]))
        i = j
    return "+".join(parts)


_BOND_BY_COS2: tuple[tuple[Scalar, int], ...] = (
    (0, 2),
    (Fraction(1, 4), 3),
    (Fraction(1, 2), 4),
    (Fraction(3, 4), 6),
    (Golden(Fraction(1, 4), Fraction(1, 4)), 5),
)


def _bond_from_inner(g_ab: Scalar, g_aa: Scalar, g_bb: Scalar) -> int:
    cos2 = exact_div(g_ab * g_ab, g_aa * g_bb)
    for value, order in _BOND_BY_COS2:
        if cos2 == value:
            return order
    raise PreconditionError(f"Angle with cos^2 = {cos2} is not a finite Coxeter bond.")


class RootSystem:
    """A finite reduced root system with a fixed positive system.

    Use :func:`build` for the catalogue types, :meth:`from_gram` for an
    arbitrary positive-definite Gram matrix and :meth:`planar` for the
    abstract dihedral realisation.
    """

    def __init__(
        self,
        diagram: DiagramType | None,
        *,
        rank: int,
        roots: tuple[ExactVector, ...] | None,
        gram: ExactMatrix | None,
        negation: np.ndarray,
        positive: np.ndarray,
        simple: tuple[int, ...],
        coxeter_matrix: tuple[tuple[int, ...], ...],
        norms: tuple[Scalar, ...],
        planar_n: int | None = None,
    ) -> None:
        self.diagram = diagram
        self.rank = rank
        self.roots = roots
        self.gram = gram
        self.kind = gram.kind if gram is not None else None
        self.negation = negation
        self.positive = positive
        self.simple = simple
        self.coxeter_matrix = coxeter_matrix
        self.norms = norms
        self.simple_norms = tuple(norms[i] for i in simple)
        self.planar_n = planar_n
        self.num_roots = len(negation)
        self.perm_dtype = np.uint8 if self.num_roots <= 256 else np.int16
        self.negation.setflags(write=False)
        self.positive.setflags(write=False)
        self._index = {coords: i for i, coords in enumerate(roots)} if roots is not None else {}
        self._reflections: dict[int, np.ndarray] = {}
        self._lock = threading.Lock()
        if gram is not None:
            self._gram_rows = gram.rows
            self.cartan = tuple(
                tuple(canonical(exact_div(2 * gram[i, j], gram[j, j]), gram.kind) for j in range(rank))
                for i in range(rank)
            )
        else:
            self._gram_rows = ()
            self.cartan = None

    def __repr__(self) -> str:
        label = str(self.diagram) if self.diagram is not None else "?"
        return f"RootSystem({label}, roots={self.num_roots})"

    # -- construction -------------------------------------------------------------

    @classmethod
    def from_gram(
        cls, gram: ExactMatrix, diagram: DiagramType | None = None, *, max_roots: int = MAX_ROOTS
    ) -> "RootSystem":
        """Close the simple roots of ``gram`` under the simple reflections."""

        if not gram.is_square:
            raise PreconditionError("Gram matrix must be square.")
        n = gram.shape[0]
        kind = gram.kind
        cartan = [[canonical(exact_div(2 * gram[i, j], gram[j, j]), kind) for j in range(n)] for i in range(n)]
        zero = canonical(0, kind)
        one = canonical(1, kind)
        simple_roots = [tuple(one if i == j else zero for i in range(n)) for j in range(n)]

        seen = set(simple_roots)
        frontier = list(simple_roots)
        while frontier:
            fresh: list[ExactVector] = []
            for vector in frontier:
                for j in range(n):
                    pairing = zero
                    for i in range(n):
                        if vector[i] and cartan[i][j]:
                            pairing = pairing + vector[i] * cartan[i][j]
                    if not pairing:
                        continue
                    image = list(vector)
                    image[j] = canonical(image[j] - pairing, kind)
                    image = tuple(image)
                    if image not in seen:
                        seen.add(image)
                        fresh.append(image)
            if len(seen) > max_roots:
                raise PreconditionError("Gram matrix does not define a finite root system.")
            frontier = fresh

        roots = tuple(sorted(seen, key=lambda v: (sum(v, zero), v)))
        index = {coords: i for i, coords in enumerate(roots)}
        negation = np.fromiter(
            (index[tuple(canonical(-x, kind) for x in v)] for v in roots), dtype=np.intp, count=len(roots)
        )
        positive = np.fromiter((sum(v, zero) > 0 for v in roots), dtype=bool, count=len(roots))
        simple = tuple(index[v] for v in simple_roots)

        coxeter = [[1] * n for _ in range(n)]
        for i, j in combinations(range(n), 2):
            order = _bond_from_inner(gram[i, j], gram[i, i], gram[j, j])
            coxeter[i][j] = coxeter[j][i] = order

        gram_rows = gram.rows
        norms = []
        for v in roots:
            applied = tuple(dot(row, v) for row in gram_rows)
            norms.append(canonical(dot(v, applied), kind))

        return cls(
            diagram,
            rank=n,
            roots=roots,
            gram=gram,
            negation=negation,
            positive=positive,
            simple=simple,
            coxeter_matrix=tuple(tuple(row) for row in coxeter),
            norms=tuple(norms),
        )

    @classmethod
    def planar(cls, n: int) -> "RootSystem":
        """Abstract realisation of the dihedral group of order ``2n``.

        For ``n = 6`` the lengths are those of G2: roots at even angles are
        short and those at odd angles long, with squared lengths 1 and 3.
        """

        if n < 2:
            raise DiagramTypeError("Dihedral types need a gonality n >= 2.")
        count = 2 * n
        negation = (np.arange(count) + n) % count
        positive = np.arange(count) < n
        return cls(
            DiagramType("G", 2, n),
            rank=2,
            roots=None,
            gram=None,
            negation=negation.astype(np.intp),
            positive=positive,
            simple=(0, n - 1),
            coxeter_matrix=((1, n), (n, 1)),
            norms=tuple(3 if n == 6 and k % 2 else 1 for k in range(count)),
            planar_n=n,
        )

    # -- basic queries ------------------------------------------------------------

    @property
    def is_planar(self) -> bool:
        return self.planar_n is not None

    @property
    def is_multi_length(self) -> bool:
        return len(set(self.norms)) > 1

    @property
    def all_roots(self) -> frozenset[int]:
        return frozenset(range(self.num_roots))

    @property
    def positive_indices(self) -> np.ndarray:
        return np.flatnonzero(self.positive)

    def node_root(self, node: int) -> int:
        if not 1 <= node <= self.rank:
            raise PreconditionError(f"Node {node} outside 1..{self.rank}.")
        return self.simple[node - 1]

    def index_of(self, coords: Sequence[Scalar]) -> int:
        key = tuple(canonical(x, self.kind) for x in coords)
        try:
            return self._index[key]
        except KeyError as exc:
            raise ValueError(f"{key} is not a root of {self}") from exc

    def bond(self, i: int, j: int) -> int:
        """Coxeter bond order between nodes ``i`` and ``j`` (1-based)."""

        return self.coxeter_matrix[i - 1][j - 1]

    def neighbours(self, node: int) -> tuple[int, ...]:
        return tuple(j for j in range(1, self.rank + 1) if j != node and self.bond(node, j) > 2)

    def _require_vectors(self, what: str) -> None:
        if self.is_planar:
            raise PreconditionError(f"{what} needs an exact vector realisation; {self} is abstract.")

    def inner(self, x: Sequence[Scalar], y: Sequence[Scalar]) -> Scalar:
        self._require_vectors("inner product")
        applied = tuple(dot(row, y) for row in self._gram_rows)
        return canonical(dot(x, applied), self.kind)

    def reflect(self, v: Sequence[Scalar], root_idx: int) -> ExactVector:
        self._require_vectors("reflect")
        alpha = self.roots[root_idx]
        factor = exact_div(2 * self.inner(v, alpha), self.norms[root_idx])
        return tuple(canonical(a - factor * b, self.kind) for a, b in zip(v, alpha))

    def _coroot_pairing(self, root_idx: int) -> tuple[Scalar, ...]:
        alpha = self.roots[root_idx]
        norm = self.norms[root_idx]
        return tuple(canonical(exact_div(2 * dot(row, alpha), norm), self.kind) for row in self._gram_rows)

    def reflection_permutation(self, root_idx: int) -> np.ndarray:
        """Root permutation of the reflection in root ``root_idx`` (cached, read-only)."""

        cached = self._reflections.get(root_idx)
        if cached is not None:
            return cached
        if self.is_planar:
            n = self.planar_n
            perm = (2 * (root_idx % n) + n - np.arange(2 * n)) % (2 * n)
        else:
            alpha = self.roots[root_idx]
            pairing = self._coroot_pairing(root_idx)
            images = []
            for gamma in self.roots:
                c = dot(gamma, pairing)
                if c:
                    gamma = tuple(canonical(a - c * b, self.kind) for a, b in zip(gamma, alpha))
                images.append(self._index[gamma])
            perm = np.asarray(images)
        perm = perm.astype(self.perm_dtype)
        perm.setflags(write=False)
        with self._lock:
            return self._reflections.setdefault(root_idx, perm)

    def simple_reflection_permutation(self, node: int) -> np.ndarray:
        return self.reflection_permutation(self.node_root(node))

    def root_bond(self, a: int, b: int) -> int:
        """Order of ``s_a s_b`` for two roots given by index."""

        if self.is_planar:
            n = self.planar_n
            difference = (a - b) % n
            return n // gcd(n, difference) if difference else 1
        return _bond_from_inner(
            self.inner(self.roots[a], self.roots[b]), self.norms[a], self.norms[b]
        )

    def span_rank(self, indices: Iterable[int]) -> int:
        chosen = sorted(set(int(i) for i in indices))
        if not chosen:
            return 0
        if self.is_planar:
            return min(2, len({i % self.planar_n for i in chosen}))
        return rank(ExactMatrix((self.roots[i] for i in chosen), self.kind))

    def span_closure(self, indices: Iterable[int]) -> frozenset[int]:
        """All roots in the linear span of the given roots."""

        chosen = sorted(set(int(i) for i in indices))
        if self.is_planar:
            lines = {i % self.planar_n for i in chosen}
            if not lines:
                return frozenset()
            if len(lines) >= 2:
                return self.all_roots
            (line,) = lines
            return frozenset({line, line + self.planar_n})
        return subsystem_in_subspace(self, [self.roots[i] for i in chosen])


def _independent(vectors: Sequence[ExactVector], kind: ScalarKind) -> list[ExactVector]:
    basis: list[ExactVector] = []
    for vector in vectors:
        if rank(ExactMatrix(basis + [vector], kind)) > len(basis):
            basis.append(vector)
    return basis


def subsystem_in_subspace(R: RootSystem, spanning: Sequence[Sequence[Scalar]]) -> frozenset[int]:
    """Indices of all roots lying in the exact linear span of ``spanning``."""

    R._require_vectors("subsystem_in_subspace")
    vectors = [tuple(canonical(x, R.kind) for x in v) for v in spanning]
    if any(len(v) != R.rank for v in vectors):
        raise PreconditionError(f"Spanning vectors must have {R.rank} coordinates.")
    basis = _independent(vectors, R.kind)
    if not basis:
        return frozenset()
    if len(basis) == R.rank:
        return R.all_roots
    size = len(basis)
    return frozenset(
        i for i, root in enumerate(R.roots) if rank(ExactMatrix(basis + [root], R.kind)) == size
    )


def reflect(R: RootSystem, v: Sequence[Scalar], root_idx: int) -> ExactVector:
    return R.reflect(v, root_idx)


# -- catalogue -------------------------------------------------------------------


def _gram_for(t: DiagramType) -> ExactMatrix:
    n = t.rank
    half = Fraction(1, 2)
    diagonal: list[Scalar] = [2] * n
    edges: list[tuple[int, int, Scalar]] = []
    kind = ScalarKind.RATIONAL
    if t.series == "A":
        edges = [(i, i + 1, -1) for i in range(1, n)]
    elif t.series == "B":
        diagonal[n - 1] = 1
        edges = [(i, i + 1, -1) for i in range(1, n)]
    elif t.series == "C":
        diagonal = [1] * (n - 1) + [2]
        edges = [(i, i + 1, -half) for i in range(1, n - 1)] + [(n - 1, n, -1)]
    elif t.series == "D":
        edges = [(i, i + 1, -1) for i in range(1, n - 1)] + [(n - 2, n, -1)]
    elif t.series == "E":
        chain = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8)]
        edges = [(i, j, -1) for i, j in chain if j <= n] + [(2, 4, -1)]
    elif t.series == "F":
        diagonal = [2, 2, 1, 1]
        edges = [(1, 2, -1), (2, 3, -1), (3, 4, -half)]
    elif t.series == "H":
        kind = ScalarKind.GOLDEN
        diagonal = [1] * n
        edges = [(1, 2, -PHI / 2)] + [(i, i + 1, -half) for i in range(2, n)]
    else:
        raise DiagramTypeError(f"{t} has no vector realisation in the catalogue.")
    rows: list[list[Scalar]] = [[0] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = diagonal[i]
    for i, j, value in edges:
        rows[i - 1][j - 1] = rows[j - 1][i - 1] = value
    return ExactMatrix(rows, kind)


@lru_cache(maxsize=None)
def _build(t: DiagramType) -> RootSystem:
    started = time.perf_counter()
    if t.is_dihedral:
        system = RootSystem.planar(t.gonality)
    else:
        system = RootSystem.from_gram(_gram_for(t), t)
    LOGGER.info(
        "Built %s with %d roots in %.3fs", t, system.num_roots, time.perf_counter() - started
    )
    return system


def build(t: DiagramType | str) -> RootSystem:
    if isinstance(t, str):
        t = DiagramType.parse(t)
    return _build(t)


# -- diagram combinatorics -------------------------------------------------------


def diagram_graph(
    nodes: Iterable[int], bonds: dict[tuple[int, int], int], lengths: dict[int, Scalar]
) -> nx.Graph:
    """Coxeter diagram as a graph with a ``length`` on each node and a ``bond`` on each edge.

    Only bonds of order greater than 2 become edges.
    """

    graph = nx.Graph()
    graph.add_nodes_from((node, {"length": lengths[node]}) for node in nodes)
    graph.add_edges_from(
        (a, b, {"bond": order})
        for (a, b), order in bonds.items()
        if order > 2 and a in graph and b in graph
    )
    return graph


def _node_graph(R: RootSystem, nodes: Iterable[int]) -> nx.Graph:
    chosen = node_set(nodes)
    for node in chosen:
        if not 1 <= node <= R.rank:
            raise PreconditionError(f"Node {node} outside 1..{R.rank}.")
    bonds = {(a, b): R.bond(a, b) for a, b in combinations(chosen, 2)}
    return diagram_graph(chosen, bonds, {node: R.simple_norms[node - 1] for node in chosen})


def _identify(graph: nx.Graph) -> tuple[DiagramType, tuple[int, ...]]:
    """Recognise one connected Coxeter diagram; returns its type and Bourbaki node order."""

    nodes = sorted(graph)
    k = len(nodes)
    if k == 1:
        return DiagramType("A", 1), (nodes[0],)
    if graph.number_of_edges() != k - 1:
        raise PreconditionError("Diagram with a cycle is not of finite type.")

    lengths = nx.get_node_attributes(graph, "length")
    heavy = [(a, b, order) for a, b, order in graph.edges(data="bond") if order > 3]
    if k == 2:
        a, b = nodes
        order = graph.edges[a, b]["bond"]
        if order == 3:
            return DiagramType("A", 2), (a, b)
        if lengths[a] > lengths[b]:
            a, b = b, a
        if order == 4:
            return DiagramType("C", 2), (a, b)
        return DiagramType("G", 2, order), (a, b)

    ends = sorted(node for node, degree in graph.degree if degree == 1)
    branches = [node for node, degree in graph.degree if degree >= 3]
    if not branches:
        first, last = ends
        if not heavy:
            return DiagramType("A", k), tuple(nx.shortest_path(graph, first, last))
        if len(heavy) > 1:
            raise PreconditionError("Path diagram with two heavy bonds is not of finite type.")
        ((a, b, order),) = heavy
        tips = [v for v in (a, b) if v in ends]
        if order == 4 and tips:
            tip = tips[0]
            inner = b if tip == a else a
            far = last if tip == first else first
            series = "B" if lengths[tip] < lengths[inner] else "C"
            return DiagramType(series, k), tuple(nx.shortest_path(graph, far, tip))
        if order == 4 and k == 4:
            first, last = sorted(ends, key=lambda v: (-lengths[v], v))
            return DiagramType("F", 4), tuple(nx.shortest_path(graph, first, last))
        if order == 5 and tips and k in (3, 4):
            far = last if tips[0] == first else first
            return DiagramType("H", k), tuple(nx.shortest_path(graph, tips[0], far))
        raise PreconditionError(f"Path diagram with a {order}-bond on {k} nodes is not of finite type.")

    if heavy or len(branches) > 1 or graph.degree[branches[0]] > 3:
        raise PreconditionError("Branched diagram is not of finite type.")
    branch = branches[0]
    arms = [nx.shortest_path(graph, branch, end)[1:] for end in ends]
    arms.sort(key=lambda arm: (len(arm), arm[-1]))
    lengths_of_arms = tuple(len(arm) for arm in arms)
    if lengths_of_arms[:2] == (1, 1):
        long_arm = arms[2]
        tips = sorted(arms[0] + arms[1])
        if lengths_of_arms == (1, 1, 1):
            long_arm = arms[0]
            tips = sorted(arms[1] + arms[2])
        order = tuple(reversed(long_arm)) + (branch,) + tuple(tips)
        return DiagramType("D", k), order
    if lengths_of_arms in ((1, 2, 2), (1, 2, 3), (1, 2, 4)):
        short, middle, long_arm = arms
        order = (middle[1], short[0], middle[0], branch) + tuple(long_arm)
        return DiagramType("E", k), order
    raise PreconditionError(f"Branched diagram with arms {lengths_of_arms} is not of finite type.")


def _components(graph: nx.Graph) -> list[NodeSet]:
    return sorted(node_set(component) for component in nx.connected_components(graph))


def components(R: RootSystem, nodes: Iterable[int]) -> list[NodeSet]:
    """Connected components of the subdiagram on ``nodes``, ordered by smallest node."""

    return _components(_node_graph(R, nodes))


def identify_nodes(R: RootSystem, nodes: Iterable[int]) -> list[tuple[DiagramType, NodeSet]]:
    """Type of each component of a node-induced subdiagram, with nodes in Bourbaki order."""

    graph = _node_graph(R, nodes)
    return [_identify(graph.subgraph(component)) for component in _components(graph)]


def classify_subsystem(R: RootSystem, roots: Iterable[int]) -> tuple[SubsystemType, ...]:
    """Irreducible types of the sub-root system formed by ``roots``.

    The simple system is read off the ambient positive system: a positive
    root of the subsystem is simple iff its reflection sends exactly one
    positive root of the subsystem to a negative root.
    """

    chosen = frozenset(int(i) for i in roots)
    if any(int(R.negation[i]) not in chosen for i in chosen):
        raise PreconditionError("Root set is not closed under negation.")
    if not chosen:
        return ()
    positives = np.array(sorted(i for i in chosen if R.positive[i]), dtype=np.intp)
    simple = [
        int(beta)
        for beta in positives
        if np.count_nonzero(~R.positive[R.reflection_permutation(int(beta))[positives]]) == 1
    ]
    bonds = {(a, b): R.root_bond(a, b) for a, b in combinations(simple, 2)}
    graph = diagram_graph(simple, bonds, {beta: R.norms[beta] for beta in simple})

    longest = max(R.norms)
    multi = R.is_multi_length
    types: list[SubsystemType] = []
    for component in _components(graph):
        diagram, _ = _identify(graph.subgraph(component))
        label = ""
        if multi and len({R.norms[beta] for beta in component}) == 1:
            label = "long" if R.norms[component[0]] == longest else "short"
        types.append(SubsystemType(diagram, label))
    return sort_types(types)


def diagram_automorphisms(t: DiagramType | RootSystem) -> list[NodePermutation]:
    """All node permutations preserving bond orders and simple-root lengths.

    A permutation is written as the tuple of images of nodes ``1..n``.
    """

    R = t if isinstance(t, RootSystem) else build(t)
    graph = _node_graph(R, range(1, R.rank + 1))
    matcher = isomorphism.GraphMatcher(
        graph,
        graph,
        node_match=isomorphism.categorical_node_match("length", None),
        edge_match=isomorphism.categorical_edge_match("bond", None),
    )
    return sorted(
        tuple(mapping[node] for node in range(1, R.rank + 1)) for mapping in matcher.isomorphisms_iter()
    )


def is_identity_permutation(sigma: Sequence[int]) -> bool:
    return all(image == node for node, image in enumerate(sigma, start=1))


def node_orbits(sigma: Sequence[int]) -> list[NodeSet]:
    """Orbits of a node permutation, ordered by smallest node."""

    seen: set[int] = set()
    orbits: list[NodeSet] = []
    for node in range(1, len(sigma) + 1):
        if node in seen:
            continue
        orbit = []
        current = node
        while current not in orbit:
            orbit.append(current)
            current = sigma[current - 1]
        seen.update(orbit)
        orbits.append(node_set(orbit))
    return orbits


def validate_automorphism(R: RootSystem, sigma: Sequence[int]) -> NodePermutation:
    sigma = tuple(int(image) for image in sigma)
    if sorted(sigma) != list(range(1, R.rank + 1)):
        raise PreconditionError(f"{sigma} is not a permutation of the nodes 1..{R.rank}.")
    if sigma not in diagram_automorphisms(R):
        raise PreconditionError(f"{sigma} is not a diagram automorphism of {R.diagram}.")
    return sigma


def parse_permutation(text: str, n: int) -> NodePermutation:
    """Parse cycle notation such as ``1:3`` or ``1:6,3:5`` into a node permutation."""

    images = list(range(1, n + 1))
    body = text.strip()
    if not body or body.lower() in ("id", "identity"):
        return tuple(images)
    for cycle in body.split(","):
        members = [int(part) for part in cycle.split(":")]
        if any(not 1 <= node <= n for node in members):
            raise ValueError(f"Permutation '{text}' mentions a node outside 1..{n}.")
        for position, node in enumerate(members):
            images[node - 1] = members[(position + 1) % len(members)]
    if sorted(images) != list(range(1, n + 1)):
        raise ValueError(f"'{text}' does not describe a permutation.")
    return tuple(images)


def format_permutation(sigma: Sequence[int]) -> str:
    cycles = [orbit for orbit in node_orbits(sigma) if len(orbit) > 1]
    if not cycles:
        return "id"
    parts = []
    for orbit in cycles:
        start = orbit[0]
        cycle = [start]
        current = sigma[start - 1]
        while current != start:
            cycle.append(current)
            current = sigma[current - 1]
        parts.append(":".join(str(node) for node in cycle))
    return ",".join(parts)


def automorphism_root_permutation(R: RootSystem, sigma: Sequence[int]) -> np.ndarray:
    """The root permutation induced by the linear extension of a diagram automorphism."""

    sigma = validate_automorphism(R, sigma)
    if R.is_planar:
        n = R.planar_n
        indices = np.arange(2 * n)
        perm = indices if sigma == (1, 2) else (n - 1 - indices) % (2 * n)
    else:
        images = []
        for coords in R.roots:
            moved = [coords[0]] * R.rank
            for node, image in enumerate(sigma):
                moved[image - 1] = coords[node]
            images.append(R.index_of(moved))
        perm = np.asarray(images)
    perm = perm.astype(R.perm_dtype)
    perm.setflags(write=False)
    return perm


def neg_w0_node_permutation(R: RootSystem, w0) -> NodePermutation:
    """The node permutation i -> j with -w0(alpha_i) = alpha_j."""

    perm = w0.perm if hasattr(w0, "perm") else np.asarray(w0)
    position = {root: node for node, root in enumerate(R.simple, start=1)}
    images = []
    for node, root in enumerate(R.simple, start=1):
        target = int(R.negation[int(perm[root])])
        if target not in position:
            raise PreconditionError(
                f"-w0 sends simple root {node} to a non-simple root; w0 is not the longest element."
            )
        images.append(position[target])
    return tuple(images)


__all__ = [
    "DiagramType",
    "NodePermutation",
    "NodeSet",
    "RootSystem",
    "SubsystemType",
    "automorphism_root_permutation",
    "build",
    "canonical_order",
    "classify_subsystem",
    "components",
    "diagram_automorphisms",
    "diagram_graph",
    "format_nodes",
    "format_permutation",
    "format_types",
    "group_order",
    "identify_nodes",
    "is_identity_permutation",
    "neg_w0_node_permutation",
    "node_orbits",
    "node_set",
    "parse_nodes",
    "parse_permutation",
    "reflect",
    "sort_types",
    "subsystem_in_subspace",
    "validate_automorphism",
]
