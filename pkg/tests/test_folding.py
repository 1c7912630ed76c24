import pytest

from coxeter_involutions.errors import PreconditionError
from coxeter_involutions.folding import fold, folded_subdiagram, induced_class_map, iota, unfolded_subdiagram
from coxeter_involutions.involutions import all_subsets, classify, is_invariant
from coxeter_involutions.rootsys import DiagramType, diagram_automorphisms
from coxeter_involutions.weyl import (
    SubgroupSpec,
    enumerate_group,
    enumerate_subgroup,
    longest_element,
    longest_parabolic,
    word_eval,
)


def _flip(n):
    return tuple(range(n, 0, -1))


def test_orbits_of_a4(system):
    f = fold(system("A4"), _flip(4))
    assert f.orbits == ((2, 3), (1, 4))
    assert f.folded.diagram == DiagramType("C", 2)
    # folded node 1 is short
    assert f.gram.rows == ((1, -1), (-1, 2))


def test_orbits_of_a3(system):
    f = fold(system("A3"), (3, 2, 1))
    assert f.orbits == ((2,), (1, 3))
    assert f.folded.diagram.coxeter_key == DiagramType("C", 2).coxeter_key


@pytest.mark.parametrize(
    "text, sigma, expected",
    [
        ("A5", _flip(5), DiagramType("B", 3)),
        ("A6", _flip(6), DiagramType("B", 3)),
        ("A7", _flip(7), DiagramType("B", 4)),
        ("D5", (1, 2, 3, 5, 4), DiagramType("C", 4)),
        ("D4", (1, 2, 4, 3), DiagramType("C", 3)),
        ("E6", (6, 2, 5, 4, 3, 1), DiagramType("F", 4)),
    ],
)
def test_folded_types(system, text, sigma, expected):
    assert fold(system(text), sigma).folded.diagram == expected


def test_fold_rejects_bad_automorphisms(system):
    d4 = system("D4")
    triality = next(sigma for sigma in diagram_automorphisms(d4) if sigma[0] == 3 and sigma[2] == 4)
    with pytest.raises(PreconditionError):
        fold(d4, triality)
    with pytest.raises(PreconditionError):
        fold(system("A3"), (2, 1, 3))


def test_planar_odd_fold(system):
    R = system("G2:5")
    f = fold(R, (2, 1))
    assert f.folded.diagram == DiagramType("A", 1)
    assert f.generators == (longest_element(R),)


def test_iota_on_generators(system):
    a3 = system("A3")
    f = fold(a3, (3, 2, 1))
    assert iota(f, [f.orbits.index((1, 3)) + 1]) == word_eval(a3, [1, 3])
    a4 = system("A4")
    g = fold(a4, _flip(4))
    assert iota(g, [g.orbits.index((2, 3)) + 1]) == word_eval(a4, [2, 3, 2])
    with pytest.raises(PreconditionError):
        iota(g, [3])


FOLDINGS = [
    ("A3", (3, 2, 1)),
    ("A4", _flip(4)),
    ("A5", _flip(5)),
    ("D4", (1, 2, 4, 3)),
    ("D5", (1, 2, 3, 5, 4)),
    ("E6", (6, 2, 5, 4, 3, 1)),
]


@pytest.mark.parametrize("text, sigma", FOLDINGS)
def test_iota_is_an_isomorphism_onto_the_fixed_subgroup(system, text, sigma):
    R = system(text)
    f = fold(R, sigma)
    folded = enumerate_group(f.folded)
    images = {iota(f, w).perm.tobytes() for w in folded}
    assert len(images) == len(folded)
    fixed = enumerate_subgroup(R, SubgroupSpec.sigma_fixed(sigma))
    assert images == {row.tobytes() for row in fixed.rows}


@pytest.mark.parametrize("text, sigma", FOLDINGS)
def test_iota_preserves_longest_elements(system, text, sigma):
    R = system(text)
    f = fold(R, sigma)
    assert iota(f, longest_element(f.folded)) == longest_element(R)
    for nodes in all_subsets(R.rank):
        if not is_invariant(nodes, sigma):
            continue
        folded_nodes = folded_subdiagram(f, nodes)
        assert unfolded_subdiagram(f, folded_nodes) == nodes
        assert iota(f, longest_parabolic(f.folded, folded_nodes)) == longest_parabolic(R, nodes)


def test_subdiagram_translation(system):
    f = fold(system("A5"), _flip(5))
    assert f.orbits == ((1, 5), (2, 4), (3,))
    assert folded_subdiagram(f, (2, 3, 4)) == (2, 3)
    assert unfolded_subdiagram(f, (2, 3)) == (2, 3, 4)
    with pytest.raises(PreconditionError):
        folded_subdiagram(f, (1,))


@pytest.mark.parametrize("text, sigma", FOLDINGS[1:])
def test_induced_class_map_is_a_bijection(system, text, sigma):
    R = system(text)
    f = fold(R, sigma)
    folded_classes = classify(f.folded, mode="exhaustive")
    ambient_classes = classify(R, SubgroupSpec.sigma_fixed(sigma), "exhaustive")
    mapping = induced_class_map(f, folded_classes, ambient_classes)
    assert sorted(mapping.values()) == list(range(len(ambient_classes)))
    assert mapping[0] == 0


def test_d4_tip_swap_has_six_classes(system):
    R = system("D4")
    f = fold(R, (1, 2, 4, 3))
    assert len(classify(f.folded, mode="exhaustive")) == 6
    assert len(classify(R, SubgroupSpec.sigma_fixed((1, 2, 4, 3)), "exhaustive")) == 6
