import cmath
from fractions import Fraction

import mpmath
import pytest

from zhatwitt.qseries import (ComplexHP, QPoint, QSeries, RootSum, evaluate, evaluate_partial_sums,
                              series_scale, series_shift, series_sum)


def geometric(n_terms):
    return QSeries.from_terms([(n, 1) for n in range(n_terms)], n_terms)


def test_from_terms_groups_exponents():
    s = QSeries.from_terms([(Fraction(1, 3), 2), (Fraction(4, 3), -1), (Fraction(1, 3), 1)], 10)
    assert s.prefactor == Fraction(1, 3)
    assert s.terms() == [(Fraction(1, 3), 3), (Fraction(4, 3), -1)]


def test_truncation_drops_unknown_terms():
    s = QSeries(0, 1, {0: 1, 3: 1, 9: 1}, 5)
    assert s.terms() == [(0, 1), (3, 1)]
    assert s.truncate(2).terms() == [(0, 1)]


def test_arithmetic_respects_truncation():
    a = QSeries(0, 1, {0: 1, 2: 1}, 4)
    b = QSeries(Fraction(1, 2), 2, {0: 3, 3: 1}, 10)
    c = a + b
    assert c.cutoff == 4
    assert c.terms() == [(0, 1), (Fraction(1, 2), 3), (2, 2)]
    assert (a - a).terms() == []
    assert (3 * a).terms() == [(0, 3), (2, 3)]
    assert series_shift(a, Fraction(1, 4)).terms() == [(Fraction(1, 4), 1), (Fraction(9, 4), 1)]
    assert series_scale(a, -1) == -a
    assert series_sum([a, a, a]) == 3 * a


def test_json_round_trip():
    s = QSeries(Fraction(-3, 2), 4, {0: 1, 5: Fraction(-2, 3)}, Fraction(41, 4))
    assert QSeries.loads(s.dumps()) == s
    assert QSeries.from_json(s.to_json()).agrees_with(s)


def test_rootsum_exact_arithmetic():
    w = RootSum.root(Fraction(1, 3))
    assert (w * w * w).terms == {Fraction(0): Fraction(1)}
    total = RootSum.root(0) + w + w * w
    assert abs(complex(total.to_complex())) < 1e-60
    assert w.rotate(Fraction(2, 3)).terms == {Fraction(0): Fraction(1)}
    assert (w - w).terms == {}


def test_evaluate_inside_disk_matches_closed_form():
    s = geometric(400)
    q = mpmath.mpc(0.3, 0.4)
    v = evaluate(s, q)
    with mpmath.workprec(256):
        assert abs(v.value - 1 / (1 - q)) <= v.err + mpmath.mpf(10) ** -60


def test_evaluate_fractional_exponents_on_point():
    s = QSeries(Fraction(1, 24), 24, {0: 1, 24: -1}, 100)
    pt = QPoint(Fraction(1, 6), Fraction(1, 100))
    want = cmath.exp(2j * cmath.pi * (1 / 6 + 0.01j) / 24) * (1 - cmath.exp(2j * cmath.pi * (1 / 6 + 0.01j)))
    assert abs(complex(evaluate(s, pt).value) - want) < 1e-12


def test_evaluate_rejects_outside_disk():
    with pytest.raises(ValueError):
        evaluate(geometric(3), 1.5)


@pytest.mark.parametrize("backend", ["numpy", "mpmath"])
def test_partial_sums(backend):
    s = geometric(50)
    out = evaluate_partial_sums(s, Fraction(1, 4), [0.1, 0.05], [Fraction(9), None], backend=backend)
    for y in (0.1, 0.05):
        q = cmath.exp(2j * cmath.pi * (0.25 + 1j * y))
        assert abs(out[(Fraction(9), y)] - sum(q ** n for n in range(10))) < 1e-12
        assert abs(out[(None, y)] - sum(q ** n for n in range(50))) < 1e-12


def test_complexhp_error_propagation():
    a = ComplexHP(mpmath.mpc(1, 1), mpmath.mpf("1e-30"))
    b = a * 2 + a
    assert abs(b.value - mpmath.mpc(3, 3)) < 1e-60
    assert b.err >= 3e-30
