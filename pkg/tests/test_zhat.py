from fractions import Fraction

import pytest

from zhatwitt import falsetheta, plumbing, zhat
from zhatwitt.errors import ValidationError
from zhatwitt.plumbing import PlumbingGraph
from zhatwitt.qseries import QSeries


@pytest.mark.parametrize("deg,expected", [
    (0, {-2: 1, 0: -2, 2: 1}),
    (1, {-1: -1, 1: 1}),
    (2, {0: 1}),
    (3, {-5: Fraction(1, 2), -3: Fraction(1, 2), -1: Fraction(1, 2),
         1: Fraction(-1, 2), 3: Fraction(-1, 2), 5: Fraction(-1, 2)}),
])
def test_pv_coefficients(deg, expected):
    got = {w: zhat.pv_coefficient(deg, w) for w in range(-5, 6) if zhat.pv_coefficient(deg, w)}
    assert got == expected


def test_pv_degree_four_matches_binomial_series():
    # (z - 1/z)^-2 = z^-2 (1 - z^-2)^-2 = sum (j+1) z^{-2-2j} near infinity
    for j in range(6):
        assert zhat.pv_coefficient(4, -2 - 2 * j) == Fraction(j + 1, 2)
        assert zhat.pv_coefficient(4, 2 + 2 * j) == Fraction(j + 1, 2)


@pytest.mark.parametrize("p", range(1, 10))
def test_lens_total_matches_direct_sum(p):
    # one vertex of degree 0: weights {1, -2, 1} at l = -2, 0, 2 and exponent l^2 / 4p
    total = None
    for _, s in zhat.zhat_all(PlumbingGraph.lens(p), 30):
        total = s if total is None else total + s
    pre = Fraction(p - 3, 4)
    want = QSeries.from_terms([(pre, -2), (pre + Fraction(1, p), 2)], pre + 30)
    assert total.agrees_with(want)


def test_poincare_sphere_against_false_theta():
    s = zhat.zhat(plumbing.load_corpus_graph("e8"), 0, 200)
    ref = falsetheta.poincare_form().series(200)
    assert s.agrees_with(ref)
    assert s.terms()[:5] == [(Fraction(-3, 2), 1), (Fraction(-1, 2), -1), (Fraction(3, 2), -1),
                             (Fraction(11, 2), -1), (Fraction(13, 2), 1)]


@pytest.mark.parametrize("name,knot,r", [("sigma_2_3_7", "T(2,3)", 1), ("sigma_2_3_11", "T(2,-3)", 2),
                                         ("sigma_2_3_13", "T(2,3)", 2), ("sigma_2_3_19", "T(2,3)", 3)])
def test_brieskorn_against_surgery_forms(name, knot, r):
    s = zhat.zhat(plumbing.load_corpus_graph(name), 0, 120)
    form = falsetheta.surgery_family(knot).form(r)
    assert s.agrees_with(form.series(200))
    assert len(s.terms()) > 4


def test_sigma_2_3_7_known_expansion():
    s = zhat.zhat(plumbing.load_corpus_graph("sigma_2_3_7"), 0, 20)
    assert [(e - Fraction(1, 2), c) for e, c in s.terms()] == [(0, 1), (1, -1), (5, -1), (10, 1), (11, -1), (18, 1)]


@pytest.mark.parametrize("name", ["lens_p5", "lens_p12", "s3_m3_52", "seifert_4fiber", "s3_p2_fig8"])
def test_conjugation_symmetry(name):
    allz = zhat.zhat_all(plumbing.load_corpus_graph(name), 40)
    for c, s in allz:
        assert s == allz[c.conjugate][1]


def test_class_selection():
    g = plumbing.load_corpus_graph("lens_p3")
    assert zhat.zhat(g, 1, 5) == zhat.zhat(g, (-2,), 5)
    with pytest.raises(ValidationError):
        zhat.zhat(g, (-1,), 5)
    with pytest.raises(ValidationError):
        zhat.zhat_all(g, 0)


def test_folded_orbits():
    g = plumbing.load_corpus_graph("seifert_4fiber")
    folded = zhat.folded_zhat(g, 30)
    assert [o for o, _ in folded] == [(0,), (1, 4), (2, 3)]
    allz = dict((c.index, s) for c, s in zhat.zhat_all(g, 30))
    assert folded[1][1] == allz[1] + allz[4]


def test_special_values():
    assert zhat.bernoulli_number(1) == Fraction(-1, 2)
    assert zhat.bernoulli_number(4) == Fraction(-1, 30)
    assert zhat.hurwitz_zeta_negint(1, Fraction(1, 3)) == Fraction(1, 36)
    assert zhat.bernoulli_poly(2, Fraction(1, 2)) == Fraction(-1, 12)


def test_limits_of_poincare_sphere():
    g = plumbing.load_corpus_graph("e8")
    assert zhat.zhat_limits(g, 6) == {0: falsetheta.poincare_form().limit(6)}
    assert abs(complex(zhat.zhat_limit_values(g, 6)[0]) - 2j) < 1e-60


@pytest.mark.parametrize("name", ["s3_m2_trefoil", "s3_m3_trefoil", "s3_p3_fig8", "s3_m3_52"])
def test_limits_agree_with_closed_forms(name):
    from zhatwitt import witt

    g = plumbing.load_corpus_graph(name)
    forms = witt.limits_from_forms(g, witt.corpus_entry(name)["closed_forms"])
    exact = zhat.zhat_limits(g, 6)
    for i, rs in forms.items():
        assert abs(complex(rs.to_complex()) - complex(exact[i].to_complex())) < 1e-40
