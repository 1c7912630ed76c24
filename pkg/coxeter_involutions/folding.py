"""Folding a root system along an order-2 diagram automorphism.

Each σ-orbit of simple roots becomes one simple root of the folded system,
taken as the orbit sum. The folded Gram matrix is the Gram matrix of those
sums, rescaled by a common factor so that the longest folded simple root has
squared length 2; with this choice A_{2n} and A_{2n-1} fold to B_n, D_{n+1}
along the fork swap folds to C_n and E6 folds to F4.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .algebra import ExactMatrix, ExactVector, Scalar, canonical, exact_div
from .errors import ClassificationIncomplete, PreconditionError
from .rootsys import (
    NodePermutation,
    NodeSet,
    RootSystem,
    build,
    format_nodes,
    format_permutation,
    identify_nodes,
    node_orbits,
    node_set,
    validate_automorphism,
)
from .weyl import (
    GroupElement,
    compose,
    identity,
    longest_element,
    longest_parabolic,
    reduced_word,
    sigma_root_permutation,
)


LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class Folding:
    """σ, its orbits, the folded simple roots and the embedding ι on generators.

    ``orbits[i]`` is the orbit behind folded node ``i + 1``; folded nodes
    follow the Bourbaki order of the folded type.
    """

    ambient: RootSystem
    sigma: NodePermutation
    sigma_roots: np.ndarray
    sigma_matrix: ExactMatrix | None
    orbits: tuple[NodeSet, ...]
    simple_vectors: tuple[ExactVector, ...] | None
    gram: ExactMatrix | None
    folded: RootSystem
    generators: tuple[GroupElement, ...]

    @property
    def rank(self) -> int:
        return len(self.orbits)

    def describe(self) -> str:
        return f"{self.ambient.diagram} folded along {format_permutation(self.sigma)} -> {self.folded.diagram}"


def _permutation_matrix(R: RootSystem, sigma: NodePermutation) -> ExactMatrix:
    rows = [[0] * R.rank for _ in range(R.rank)]
    for node, image in enumerate(sigma, start=1):
        rows[image - 1][node - 1] = 1
    return ExactMatrix(rows, R.kind)


def _orbit_vector(R: RootSystem, orbit: NodeSet) -> ExactVector:
    return tuple(canonical(1 if node in orbit else 0, R.kind) for node in range(1, R.rank + 1))


def _cartan(gram: ExactMatrix) -> tuple[tuple[Scalar, ...], ...]:
    n = gram.shape[0]
    return tuple(
        tuple(canonical(exact_div(2 * gram[i, j], gram[j, j]), gram.kind) for j in range(n)) for i in range(n)
    )


def _fold_planar(R: RootSystem, sigma: NodePermutation) -> Folding:
    orbits = tuple(node_orbits(sigma))
    if len(orbits) == 2:
        folded = R
    else:
        folded = build("A1")
    return Folding(
        ambient=R,
        sigma=sigma,
        sigma_roots=sigma_root_permutation(R, sigma),
        sigma_matrix=None,
        orbits=orbits,
        simple_vectors=None,
        gram=None,
        folded=folded,
        generators=tuple(longest_parabolic(R, orbit) for orbit in orbits),
    )


@lru_cache(maxsize=None)
def _fold(R: RootSystem, sigma: NodePermutation) -> Folding:
    if R.is_planar:
        return _fold_planar(R, sigma)

    orbits = node_orbits(sigma)
    for orbit in orbits:
        if len(orbit) == 2 and R.bond(*orbit) not in (2, 3):
            raise PreconditionError(f"Orbit {format_nodes(orbit)} spans neither A1xA1 nor A2.")
    vectors = [_orbit_vector(R, orbit) for orbit in orbits]
    raw = [[R.inner(u, v) for v in vectors] for u in vectors]
    scale = exact_div(2, max(raw[i][i] for i in range(len(orbits))))
    raw_gram = ExactMatrix([[canonical(scale * x, R.kind) for x in row] for row in raw], R.kind)

    provisional = RootSystem.from_gram(raw_gram)
    identified = identify_nodes(provisional, range(1, len(orbits) + 1))
    if len(identified) != 1:
        raise PreconditionError(f"Folding {R.diagram} along {format_permutation(sigma)} is not irreducible.")
    diagram, order = identified[0]

    ordered_orbits = tuple(orbits[node - 1] for node in order)
    ordered_vectors = tuple(vectors[node - 1] for node in order)
    gram = ExactMatrix(
        [[raw_gram[a - 1, b - 1] for b in order] for a in order],
        R.kind,
    )
    folded = build(diagram)
    if _cartan(gram) != folded.cartan:
        raise PreconditionError(f"Folded Gram matrix does not match the catalogue {diagram}.")

    sigma_matrix = _permutation_matrix(R, sigma)
    for vector in ordered_vectors:
        if sigma_matrix.apply(vector) != vector:
            raise RuntimeError("Folded simple root is not fixed by sigma.")
    return Folding(
        ambient=R,
        sigma=sigma,
        sigma_roots=sigma_root_permutation(R, sigma),
        sigma_matrix=sigma_matrix,
        orbits=ordered_orbits,
        simple_vectors=ordered_vectors,
        gram=gram,
        folded=folded,
        generators=tuple(longest_parabolic(R, orbit) for orbit in ordered_orbits),
    )


def fold(R: RootSystem, sigma: Sequence[int]) -> Folding:
    """Build the folded root system of ``R`` along the automorphism ``sigma``."""

    sigma = validate_automorphism(R, sigma)
    if any(sigma[sigma[i] - 1] != i + 1 for i in range(R.rank)):
        raise PreconditionError(f"Only automorphisms of order at most 2 can be folded, got {format_permutation(sigma)}.")
    folding = _fold(R, sigma)
    LOGGER.debug("%s", folding.describe())
    return folding


def iota(f: Folding, w_folded: GroupElement | Iterable[int]) -> GroupElement:
    """Image in the ambient group of a folded element or of a word in folded generators."""

    if isinstance(w_folded, GroupElement):
        if w_folded.system is not f.folded:
            raise PreconditionError("Element does not belong to the folded root system.")
        word: Iterable[int] = reduced_word(f.folded, w_folded)
    else:
        word = w_folded
    result = identity(f.ambient)
    for node in word:
        if not 1 <= node <= f.rank:
            raise PreconditionError(f"Folded node {node} outside 1..{f.rank}.")
        result = compose(result, f.generators[node - 1])
    return result


def folded_subdiagram(f: Folding, nodes: Iterable[int]) -> NodeSet:
    """Folded nodes whose orbits meet the σ-invariant subdiagram ``nodes``."""

    chosen = node_set(nodes)
    if any(f.sigma[node - 1] not in chosen for node in chosen):
        raise PreconditionError(f"{format_nodes(chosen)} is not sigma-invariant.")
    return node_set(i for i, orbit in enumerate(f.orbits, start=1) if set(orbit) & set(chosen))


def unfolded_subdiagram(f: Folding, folded_nodes: Iterable[int]) -> NodeSet:
    """Union of the orbits behind the given folded nodes."""

    return node_set(node for index in node_set(folded_nodes) for node in f.orbits[index - 1])


def induced_class_map(f: Folding, folded_classes, ambient_classes) -> dict[int, int]:
    """Folded class index -> index of the ambient σ-fixed class containing ι(rep).

    Both arguments are classifications (see ``involutions.classify``); the
    map must be a bijection and must intertwine multiplication by the two
    longest elements.
    """

    mapping = {
        i: ambient_classes.index_of(iota(f, cls.representative)) for i, cls in enumerate(folded_classes)
    }
    if len(folded_classes) != len(ambient_classes) or len(set(mapping.values())) != len(mapping):
        raise ClassificationIncomplete(
            f"{len(folded_classes)} folded classes do not match {len(ambient_classes)} classes of the fixed subgroup."
        )
    folded_w0 = longest_element(f.folded)
    ambient_w0 = longest_element(f.ambient)
    for i, cls in enumerate(folded_classes):
        folded_image = compose(folded_w0, cls.representative)
        ambient_image = compose(ambient_w0, iota(f, cls.representative))
        if not (folded_image.is_involution and ambient_image.is_involution):
            continue
        if mapping[folded_classes.index_of(folded_image)] != ambient_classes.index_of(ambient_image):
            raise ClassificationIncomplete("Folding does not intertwine multiplication by w_o.")
    return mapping


__all__ = [
    "Folding",
    "fold",
    "folded_subdiagram",
    "induced_class_map",
    "iota",
    "unfolded_subdiagram",
]
