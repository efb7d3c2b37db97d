import random
from fractions import Fraction

import mpmath
import pytest

from zhatwitt import plumbing, witt, zhat
from zhatwitt.errors import (InconsistentChannel, MissingLimitValue, NumericError, PairingNotFound,
                             RecognitionFailed)
from zhatwitt.plumbing import PlumbingGraph
from zhatwitt.qseries import ComplexHP


def lattice(a, b):
    return 1j ** a * 3 ** (b / 2)


@pytest.mark.parametrize("a", range(4))
@pytest.mark.parametrize("b", [-2, 0, 1, 3])
def test_recognize_lattice_points(a, b):
    tv = witt.recognize(lattice(a, b) * (1 + 1e-9))
    assert (tv.a, tv.b) == (a, b)
    assert tv.residual < 1e-7
    assert abs(tv.exact - lattice(a, b)) < 1e-12


def test_recognize_failures():
    with pytest.raises(RecognitionFailed):
        witt.recognize(0.5 + 0.5j)
    with pytest.raises(RecognitionFailed):
        witt.recognize(0)
    with pytest.raises(NumericError):
        witt.recognize(ComplexHP(mpmath.mpc(1), mpmath.mpf("1e-3")))


def test_recognize_random_noise_stays_on_lattice():
    rng = random.Random(3)
    for _ in range(500):
        a, b = rng.randrange(4), rng.randrange(-4, 7)
        z = lattice(a, b) + complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) * 1e-8
        tv = witt.recognize(z)
        assert (tv.a, tv.b) == (a, b)


@pytest.mark.parametrize("p", [1, 3, 5, 7, 9])
def test_cwitt_odd_matches_formula(p):
    for t in range(p):
        with mpmath.workprec(128):
            s = sum(mpmath.expjpi(-mpmath.mpf((2 * p * r - 2 * t + p) ** 2) / (12 * p)) for r in range(6))
            want = mpmath.expjpi(-0.25) / (4 * mpmath.sqrt(3)) * s
        assert abs(witt.cwitt_odd(p, t) - want) < 1e-25
    if p == 1:
        assert abs(witt.cwitt_odd(1, 0) + 0.5j) < 1e-30


@pytest.mark.parametrize("p", [2, 4, 6])
def test_cwitt_even_matches_formula(p):
    for w in (0, 1):
        for t in range(p):
            with mpmath.workprec(128):
                e = mpmath.expjpi
                want = e(-0.25) / (2 * mpmath.sqrt(3)) * e(-mpmath.mpf((2 * t + p * (w + 1)) ** 2) / (12 * p)) * (
                    1 + e(mpmath.mpf(p * w + 2 * t) / 3) + e(2 * mpmath.mpf(p * w + 2 * t - p) / 3))
            assert abs(witt.cwitt_even(p, w, t) - want) < 1e-25
            assert witt.cwitt(p, w, t) == witt.cwitt_even(p, w, t)


@pytest.mark.parametrize("p", range(1, 13))
def test_sum_rule(p):
    assert witt.sumrule_check(p).passed


def test_sum_rule_negative_control():
    assert not witt.sumrule_check(5, lk=Fraction(1, 5)).passed


@pytest.mark.parametrize("p,values", [(3, [(1, 1)]), (5, [(2, 0)]), (7, [(0, 0)]),
                                      (2, [(2, 0), (0, 1)]), (6, [(1, 1), (2, 1)]),
                                      (12, [(1, 1), (3, 1)])])
def test_lens_channels(p, values):
    chans = witt.tau6_channels(PlumbingGraph.lens(p))
    assert [(c.theta, c.method) for c in chans][0] == ((0,), "plumbed+cwitt")
    for c, (a, b) in zip(chans, values):
        assert abs(complex(c.value.value) - lattice(a, b)) < 1e-12


def test_tau6_methods_agree_and_select():
    g = plumbing.load_corpus_graph("s3_m3_52")
    vp = witt.tau6_channels(g, "plumbed")
    vc = witt.tau6_channels(g, "cwitt")
    for a, b in zip(vp, vc):
        assert abs(a.value.value - b.value.value) < 1e-20
    assert witt.tau6(g).b == 1
    with pytest.raises(ValueError):
        witt.tau6(g, (1, 1, 1, 1, 1, 1, 1))


def test_wrong_pairing_is_inconsistent():
    g = PlumbingGraph.lens(5)
    good = witt.find_pairing(g)
    bad = {orb: (t + 1) % 5 for orb, t in good.items()}
    with pytest.raises(InconsistentChannel):
        witt.tau6_channels(g, pairing=bad)


def test_pairing_on_lens():
    assert witt.find_pairing(PlumbingGraph.lens(1)) == {(0,): 0}
    pairing = witt.find_pairing(PlumbingGraph.lens(5))
    assert set(pairing) == {(0,), (1, 4), (2, 3)}


def test_pairing_needs_cyclic_group():
    # the D4 plumbing has H_1 = Z/2 + Z/2
    hd = plumbing.validate(PlumbingGraph.star(-2, [[-2], [-2], [-2]]))
    assert hd.torsion == (2, 2)
    with pytest.raises(PairingNotFound):
        witt.find_pairing(hd)
    chans = witt.tau6_channels(hd)
    assert len(chans) == 4 and all(c.method == "plumbed" for c in chans)
    with pytest.raises(PairingNotFound):
        witt.tau6_channels(hd, "cwitt")


def test_extract_invariants_from_lattice_points():
    tv = lambda a, b: witt.recognize(lattice(a, b))
    rep = witt.extract_invariants([((0,), tv(1, 1)), ((1,), tv(2, 1))], 1, {(1,): (2, "table")}, "x", 3)
    assert (rep.w, rep.d) == (3, 1)
    c1 = rep.channel((1,))
    assert (c1.epsilon, c1.d_cover, c1.def3, c1.two_theta_cubed_source) == (1, 1, 3, "table")
    assert rep.agrees_4d
    js = rep.to_json()
    assert js["channels"][0]["two_theta_cubed"] == {"value": 0, "source": "trivial"}
    rep = witt.extract_invariants([((0,), tv(2, 0)), ((1,), tv(0, 1))], 0)
    assert rep.channel((1,)).two_theta_cubed_source == "assumed"
    with pytest.raises(InconsistentChannel):
        witt.extract_invariants([((0,), tv(0, 1))], 0)


def test_witt_4d_of_lens_and_e8():
    assert witt.witt_4d(((-3,),)) == (-1 - 0) % 4
    assert witt.witt_4d(((-2,),)) == (-1 - 1) % 4
    assert witt.witt_4d(plumbing.adjacency_matrix(plumbing.load_corpus_graph("e8"))) == 0


@pytest.mark.parametrize("p", range(2, 25, 2))
def test_lens_reports_agree_with_4d(p):
    rep = witt.witt_report(PlumbingGraph.lens(p))
    assert rep.agrees_4d
    assert rep.channels[1].two_theta_cubed_source == "table"


def test_two_theta_cubed_override_shifts_def3():
    g = plumbing.load_corpus_graph("s3_p2_fig8")
    base = witt.witt_report(g)
    assert base.channels[1].two_theta_cubed_source == "input"
    other = witt.witt_report(g, {base.channels[1].theta: (0, "input")})
    assert (other.channels[1].def3 - base.channels[1].def3) % 4 == 2


def test_limits_from_forms_requires_every_orbit():
    g = plumbing.load_corpus_graph("seifert_4fiber")
    forms = witt.corpus_entry("seifert_4fiber")["closed_forms"]
    full = witt.limits_from_forms(g, forms)
    assert set(full) == set(range(5))
    with pytest.raises(MissingLimitValue):
        witt.limits_from_forms(g, forms[:2])


def test_closed_form_limits_reproduce_plumbing_limits():
    for name in ("seifert_4fiber", "s3_p2_fig8"):
        g = plumbing.load_corpus_graph(name)
        a = witt.limits_from_forms(g, witt.corpus_entry(name)["closed_forms"])
        b = zhat.zhat_limits(g, 6)
        assert all(abs(complex(a[i].to_complex()) - complex(b[i].to_complex())) < 1e-40 for i in a)


def test_corpus_two_theta_cubed():
    got = witt.corpus_two_theta_cubed("s3_m2_trefoil")
    assert got == {(0, 1, 0, 1): (2, "input")}
    assert witt.corpus_two_theta_cubed("s3_m3_trefoil") == {}
    with pytest.raises(KeyError):
        witt.corpus_entry("nope")
