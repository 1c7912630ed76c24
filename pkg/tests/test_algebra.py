from fractions import Fraction

import numpy as np
import pytest

from coxeter_involutions.algebra import (
    PHI,
    ExactMatrix,
    Golden,
    ScalarKind,
    canonical,
    determinant,
    exact_div,
    is_positive_definite,
    rank,
    trace,
)


def test_golden_ratio_satisfies_its_minimal_polynomial():
    assert PHI * PHI == PHI + 1
    assert PHI.inverse() == Golden(-1, 1)
    assert PHI / PHI == 1


@pytest.mark.parametrize(
    "value, expected",
    [
        (Golden(0, 1), 1),
        (Golden(-2, 1), -1),
        (Golden(-1, 1), 1),
        (Golden(2, -1), 1),
        (Golden(3, -2), -1),
        (Golden(0, 0), 0),
    ],
)
def test_golden_sign_is_exact(value, expected):
    assert value.sign() == expected


def test_golden_ordering_and_hash_agree_with_rationals():
    assert Golden(1, 0) == 1
    assert hash(Golden(Fraction(1, 2), 0)) == hash(Fraction(1, 2))
    assert Golden(1, 0) < PHI < 2


def test_exact_div_never_returns_float():
    assert exact_div(1, 2) == Fraction(1, 2)
    assert isinstance(exact_div(4, 2), Fraction)
    assert exact_div(PHI, 2) == Golden(0, Fraction(1, 2))


def test_canonical_rejects_floats():
    with pytest.raises(TypeError):
        canonical(0.5, ScalarKind.RATIONAL)
    assert canonical(Fraction(4, 2), ScalarKind.RATIONAL) == 2
    assert isinstance(canonical(Fraction(4, 2), ScalarKind.RATIONAL), int)


def test_rank_of_trivial_matrices():
    assert rank(ExactMatrix.identity(2)) == 2
    assert rank(ExactMatrix([[0, 0], [0, 0]])) == 0


def test_rank_pivot_orders_agree():
    m = ExactMatrix([[1, 2, 3], [2, 4, 6], [Fraction(1, 2), 0, 1]])
    assert rank(m) == rank(m, pivoting="last") == 2


def test_h3_gram_matrix_is_positive_definite(system):
    gram = system("H3").gram
    assert gram.kind is ScalarKind.GOLDEN
    assert rank(gram) == 3
    assert is_positive_definite(gram)


def test_determinant_and_trace():
    a2 = ExactMatrix([[2, -1], [-1, 2]])
    assert determinant(a2) == 3
    assert trace(ExactMatrix.identity(4)) == 4
    assert not is_positive_definite(ExactMatrix([[2, -2], [-2, 2]]))


def _random_golden(rng):
    a, b = rng.integers(-9, 10, size=2)
    c, d = rng.integers(1, 6, size=2)
    return Golden(Fraction(int(a), int(c)), Fraction(int(b), int(d)))


def test_golden_field_axioms_on_samples():
    rng = np.random.default_rng(7)
    for _ in range(200):
        x, y, z = (_random_golden(rng) for _ in range(3))
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        if x:
            assert x * x.inverse() == 1
        assert float(x * y) == pytest.approx(float(x) * float(y), abs=1e-9)


def test_rank_pivot_orders_agree_on_random_matrices():
    rng = np.random.default_rng(11)
    for _ in range(100):
        rows, cols = rng.integers(1, 6, size=2)
        entries = rng.integers(-2, 3, size=(rows, cols))
        # repeat a row now and then to force rank deficiency
        if rows > 1 and rng.random() < 0.5:
            entries[-1] = entries[0] * 2
        m = ExactMatrix([[int(x) for x in row] for row in entries])
        assert rank(m) == rank(m, pivoting="last") == np.linalg.matrix_rank(entries)
