import pytest

from coxeter_involutions.errors import DiagramTypeError
from coxeter_involutions.golden import (
    GoldenLine,
    GoldenTable,
    Provenance,
    expected_table,
    load_golden,
    save_golden,
    table1_dims,
    tabulated_types,
    verify,
    verify_all,
)
from coxeter_involutions.involutions import A_EVEN, A_ODD, BC, D_FAMILY, pattern_keys, pattern_nodes
from coxeter_involutions.rootsys import DiagramType
from coxeter_involutions.weyl import SubgroupSpec, compose, dim_minus, longest_element, longest_parabolic


def test_load_golden():
    tables = load_golden()
    assert set(tables) == {DiagramType(series, rank) for series, rank in [("E", 6), ("E", 7), ("E", 8), ("F", 4), ("H", 3), ("H", 4)]}
    e7 = tables[DiagramType("E", 7)]
    assert len(e7) == 5
    assert e7.line(2).left == ((1,), (3,))
    assert e7.line(2).right == ((2, 3, 4, 5, 6, 7),)
    assert tables[DiagramType("H", 4)].line(3).is_self
    assert tables[DiagramType("E", 6)].spec == SubgroupSpec.centralizer()
    assert tables[DiagramType("E", 8)].line(4).provenance.deviates


def test_provenance_parsing():
    assert Provenance.parse("TABLE E6:1") == Provenance("TABLE", "E6:1")
    derived = Provenance.parse("DERIVED! swapped boxes")
    assert derived.deviates
    assert str(derived) == "DERIVED! swapped boxes"
    with pytest.raises(ValueError):
        Provenance.parse("TABLE! E6:1")
    with pytest.raises(ValueError):
        Provenance.parse("GUESS E6:1")


def test_saved_tables_load_back(tmp_path):
    path = tmp_path / "golden.txt"
    tables = load_golden()
    save_golden(tables.values(), path)
    assert load_golden(path) == tables


def test_malformed_golden_lines_are_errors(tmp_path):
    path = tmp_path / "golden.txt"
    path.write_text("F4 | full | 1 | {} | {1,2,3,4}\n", encoding="utf-8")
    with pytest.raises(ValueError, match="expected 6 fields"):
        load_golden(path)
    path.write_text("F4 | full | 1 | {} | {1,2,3,9} | TABLE F4:1\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_golden(path)


@pytest.mark.parametrize(
    "family, n, text",
    [
        (A_EVEN, 2, "A4"),
        (A_EVEN, 3, "A6"),
        (A_ODD, 2, "A3"),
        (A_ODD, 3, "A5"),
        (BC, 4, "C4"),
        (D_FAMILY, 3, "D4"),
        (D_FAMILY, 4, "D5"),
    ],
)
def test_classical_dimensions(system, family, n, text):
    R = system(text)
    w0 = longest_element(R)
    for key in pattern_keys(family, n):
        w = longest_parabolic(R, pattern_nodes(key))
        assert (dim_minus(w), dim_minus(compose(w0, w))) == table1_dims(family, n, key.k, key.l)


def test_dihedral_tables():
    assert expected_table("G2:6").line(2).right == ((2,),)
    eight = expected_table("G2:8")
    assert eight.line(2).is_self and eight.line(3).is_self
    assert eight.line(2).provenance.deviates
    odd = expected_table("G2:5")
    assert len(odd) == 1
    assert odd.spec == SubgroupSpec.centralizer()


def test_spin_lines():
    d4 = expected_table("D4")
    assert [line.left for line in d4.lines[-2:]] == [((1, 3),), ((1, 4),)]
    assert all(line.is_self for line in d4.lines[-2:])
    d6 = expected_table("D6")
    assert d6.lines[-1].left == ((1, 3, 5),)
    assert d6.lines[-1].right == ((1, 3, 6),)


def test_odd_a_lines_are_marked():
    assert all(line.provenance.deviates for line in expected_table("A5").lines)
    assert not any(line.provenance.deviates for line in expected_table("C5").lines)


def test_untabulated_types_are_rejected():
    with pytest.raises(DiagramTypeError, match="No golden table"):
        expected_table("F4", tables={})


FAST_TYPES = [
    "F4", "H3", "H4", "E6",
    "A1", "A2", "A3", "A4", "A5", "A6",
    "C2", "C3", "C4", "C5",
    "D4", "D5", "D6",
] + [f"G2:{n}" for n in range(2, 13)]


@pytest.mark.parametrize("text", FAST_TYPES)
def test_verify_passes(text):
    report = verify(text)
    assert report.passed, report.describe()
    assert not report.discrepancies


@pytest.mark.slow
@pytest.mark.parametrize("text", ["E7", "E8", "A7", "A8", "C6", "D7", "D8"])
def test_verify_passes_on_large_types(text):
    report = verify(text, mode="neg_orbit")
    assert report.passed, report.describe()


def test_verify_reports_a_wrong_line():
    f4 = DiagramType("F", 4)
    wrong = GoldenTable(
        f4,
        SubgroupSpec.full(),
        (
            GoldenLine(1, ((),), ((1, 2, 3, 4),), Provenance("TABLE", "F4:1")),
            GoldenLine(2, ((1,),), ((1, 2, 3),), Provenance("TABLE", "F4:2")),
        ),
    )
    report = verify("F4", tables={f4: wrong})
    assert not report.passed
    assert report.results[0].passed
    assert not report.results[1].passed
    assert "expected" in report.results[1].message
    assert report.discrepancies


def test_verify_all_keeps_input_order():
    types = [DiagramType("A", 2), DiagramType("H", 3), DiagramType("G", 2, 5)]
    reports = verify_all(types, threads=2)
    assert [report.diagram for report in reports] == types
    assert all(report.passed for report in reports)


def test_tabulated_types_cover_the_exceptional_tables():
    assert set(load_golden()) <= set(tabulated_types())
