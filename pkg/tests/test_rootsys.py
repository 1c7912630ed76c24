import numpy as np
import pytest

from coxeter_involutions.errors import DiagramTypeError, PreconditionError
from coxeter_involutions.rootsys import (
    DiagramType,
    SubsystemType,
    automorphism_root_permutation,
    classify_subsystem,
    components,
    diagram_automorphisms,
    diagram_graph,
    format_permutation,
    format_types,
    group_order,
    identify_nodes,
    neg_w0_node_permutation,
    parse_nodes,
    parse_permutation,
    subsystem_in_subspace,
)
from coxeter_involutions.weyl import is_central, is_minus_one, longest_element, negated_roots


def _t(text):
    return DiagramType.parse(text)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("E7", DiagramType("E", 7)),
        ("BC5", DiagramType("C", 5)),
        ("d6", DiagramType("D", 6)),
        ("G2", DiagramType("G", 2, 6)),
        ("G2:8", DiagramType("G", 2, 8)),
        ("G2(8)", DiagramType("G", 2, 8)),
        ("I2(5)", DiagramType("G", 2, 5)),
        ("H4", DiagramType("H", 4)),
    ],
)
def test_parse_diagram_types(text, expected):
    assert DiagramType.parse(text) == expected


def test_bc_realization_is_selectable():
    assert DiagramType.parse("BC4", realization="B") == DiagramType("B", 4)
    assert DiagramType("B", 4).coxeter_key == DiagramType("C", 4).coxeter_key


@pytest.mark.parametrize("text", ["E9", "X3", "D3", "I2", "A0", "H5", "F4:3", "seven"])
def test_bad_diagram_types_are_rejected(text):
    with pytest.raises(DiagramTypeError):
        DiagramType.parse(text)


def test_type_names_round_trip():
    assert str(_t("G2")) == "G2"
    assert str(_t("G2:8")) == "G2(8)"
    assert str(_t("BC3")) == "C3"


@pytest.mark.parametrize(
    "text, roots",
    [("A1", 2), ("A2", 6), ("B3", 18), ("C3", 18), ("D4", 24), ("E6", 72), ("E7", 126), ("F4", 48), ("G2:7", 14), ("H3", 30), ("H4", 120)],
)
def test_root_counts(system, text, roots):
    R = system(text)
    assert R.num_roots == roots
    assert R.positive.sum() == roots // 2


@pytest.mark.slow
def test_e8_has_240_roots(system):
    assert system("E8").num_roots == 240


def test_reflect_on_simple_roots(system):
    a1 = system("A1")
    assert a1.reflect((1,), a1.simple[0]) == (-1,)
    a2 = system("A2")
    assert a2.reflect((0, 1), a2.simple[0]) == (1, 1)
    a3 = system("A3")
    assert a3.reflect((1, 0, 0), a3.simple[2]) == (1, 0, 0)


def test_reflection_permutations_are_involutions(system):
    R = system("F4")
    for index in range(R.num_roots):
        perm = R.reflection_permutation(index)
        assert (perm[perm] == np.arange(R.num_roots)).all()
        assert perm[index] == R.negation[index]


def test_subsystem_in_subspace_edges(system):
    R = system("C5")
    basis = [R.roots[i] for i in R.simple]
    assert subsystem_in_subspace(R, basis) == R.all_roots
    assert subsystem_in_subspace(R, []) == frozenset()
    a3 = subsystem_in_subspace(R, basis[:3])
    assert len(a3) == 12
    assert classify_subsystem(R, a3) == (SubsystemType(DiagramType("A", 3), "short"),)


def test_classify_single_root_pair(system):
    R = system("A3")
    root = R.simple[0]
    assert classify_subsystem(R, {root, int(R.negation[root])}) == (SubsystemType(DiagramType("A", 1)),)


def test_classify_all_roots_of_d4(system):
    R = system("D4")
    assert classify_subsystem(R, negated_roots(longest_element(R))) == (SubsystemType(DiagramType("D", 4)),)


def test_classify_orthogonal_short_roots_of_c2(system):
    R = system("C2")
    short = [R.index_of((1, 0)), R.index_of((1, 1))]
    roots = set(short) | {int(R.negation[i]) for i in short}
    short_a1 = SubsystemType(DiagramType("A", 1), "short")
    assert classify_subsystem(R, roots) == (short_a1, short_a1)
    assert format_types(classify_subsystem(R, roots)) == "2A1(short)"


def test_classify_requires_negation_closed_sets(system):
    R = system("A2")
    with pytest.raises(PreconditionError):
        classify_subsystem(R, {R.simple[0]})


@pytest.mark.parametrize(
    "text, order",
    [("A4", 120), ("C4", 384), ("D5", 1920), ("E6", 51840), ("F4", 1152), ("G2:9", 18), ("H4", 14400)],
)
def test_group_orders(text, order):
    assert group_order(_t(text)) == order


FACT_ONE_TYPES = [
    "A1", "A2", "A3", "A4", "A5", "C2", "B3", "C4", "D4", "D5", "D6", "D7",
    "E6", "E7", "F4", "G2:2", "G2:3", "G2:4", "G2:5", "G2", "G2:8", "H3", "H4",
]


@pytest.mark.parametrize("text", FACT_ONE_TYPES)
def test_longest_element_is_minus_one_exactly_for_listed_types(system, text):
    R = system(text)
    w0 = longest_element(R)
    assert is_minus_one(w0) == R.diagram.has_central_longest
    assert is_central(R, w0) == is_minus_one(w0)


def test_diagram_automorphisms(system):
    assert diagram_automorphisms(_t("A3")) == [(1, 2, 3), (3, 2, 1)]
    assert diagram_automorphisms(_t("E7")) == [tuple(range(1, 8))]
    d4 = diagram_automorphisms(_t("D4"))
    assert len(d4) == 6
    assert all(sigma[1] == 2 for sigma in d4)
    assert len(diagram_automorphisms(_t("E6"))) == 2
    assert diagram_automorphisms(_t("C3")) == [(1, 2, 3)]


def test_g2_automorphisms_respect_root_lengths(system):
    assert diagram_automorphisms(_t("G2")) == [(1, 2)]
    assert diagram_automorphisms(_t("G2:8")) == [(1, 2), (2, 1)]
    assert diagram_automorphisms(_t("G2:5")) == [(1, 2), (2, 1)]
    R = system("G2")
    assert R.simple_norms == (1, 3)
    with pytest.raises(PreconditionError):
        automorphism_root_permutation(R, (2, 1))
    short = R.simple[0]
    assert classify_subsystem(R, {short, int(R.negation[short])}) == (SubsystemType(DiagramType("A", 1), "short"),)
    assert identify_nodes(R, [1, 2]) == [(DiagramType("G", 2, 6), (1, 2))]


def test_diagram_graph_carries_lengths_and_bonds():
    graph = diagram_graph([1, 2, 3], {(1, 2): 3, (2, 3): 4, (1, 3): 2}, {1: 2, 2: 2, 3: 1})
    assert sorted(graph.edges(data="bond")) == [(1, 2, 3), (2, 3, 4)]
    assert graph.nodes[3]["length"] == 1


def test_components(system):
    R = system("E7")
    assert components(R, [1, 2, 3, 5, 6, 7]) == [(1, 3), (2,), (5, 6, 7)]
    assert components(R, []) == []
    with pytest.raises(PreconditionError):
        components(R, [8])


@pytest.mark.parametrize(
    "text, expected",
    [("E7", tuple(range(1, 8))), ("A3", (3, 2, 1)), ("E6", (6, 2, 5, 4, 3, 1)), ("D5", (1, 2, 3, 5, 4)), ("D4", (1, 2, 3, 4))],
)
def test_neg_w0_node_permutation(system, text, expected):
    R = system(text)
    assert neg_w0_node_permutation(R, longest_element(R)) == expected


def test_permutation_notation():
    assert parse_permutation("1:3", 3) == (3, 2, 1)
    assert parse_permutation("1:6,3:5", 6) == (6, 2, 5, 4, 3, 1)
    assert parse_permutation("id", 4) == (1, 2, 3, 4)
    assert format_permutation((6, 2, 5, 4, 3, 1)) == "1:6,3:5"
    assert format_permutation((1, 2)) == "id"
    with pytest.raises(ValueError):
        parse_permutation("1:9", 4)


def test_automorphism_acts_on_roots(system):
    R = system("E6")
    sigma = (6, 2, 5, 4, 3, 1)
    perm = automorphism_root_permutation(R, sigma)
    assert (perm[perm] == np.arange(R.num_roots)).all()
    for node, image in enumerate(sigma, start=1):
        assert perm[R.simple[node - 1]] == R.simple[image - 1]


def test_automorphism_must_preserve_the_diagram(system):
    with pytest.raises(PreconditionError):
        automorphism_root_permutation(system("A3"), (2, 1, 3))


def test_identify_nodes_uses_bourbaki_order(system):
    assert identify_nodes(system("F4"), [1, 2, 3, 4]) == [(DiagramType("F", 4), (1, 2, 3, 4))]
    assert identify_nodes(system("C5"), [4, 5]) == [(DiagramType("C", 2), (4, 5))]
    assert identify_nodes(system("D7"), [3, 4, 5, 6, 7]) == [(DiagramType("D", 5), (3, 4, 5, 6, 7))]
    assert identify_nodes(system("E6"), range(1, 7)) == [(DiagramType("E", 6), (1, 2, 3, 4, 5, 6))]
    assert identify_nodes(system("E7"), range(1, 8)) == [(DiagramType("E", 7), tuple(range(1, 8)))]
    assert identify_nodes(system("B4"), range(1, 5)) == [(DiagramType("B", 4), (1, 2, 3, 4))]
    assert identify_nodes(system("H4"), range(1, 5)) == [(DiagramType("H", 4), (1, 2, 3, 4))]
    assert identify_nodes(system("D4"), range(1, 5)) == [(DiagramType("D", 4), (1, 2, 3, 4))]
    assert identify_nodes(system("F4"), [2, 3]) == [(DiagramType("C", 2), (3, 2))]
    assert identify_nodes(system("A5"), [1, 2, 4, 5]) == [
        (DiagramType("A", 2), (1, 2)),
        (DiagramType("A", 2), (4, 5)),
    ]


def test_parse_nodes():
    assert parse_nodes("{}") == ()
    assert parse_nodes("{3, 1}") == (1, 3)
    with pytest.raises(ValueError):
        parse_nodes("1,3")
