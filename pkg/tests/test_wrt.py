import itertools
from fractions import Fraction

import mpmath
import pytest

from zhatwitt import plumbing, wrt
from zhatwitt.errors import DenominatorVanishes
from zhatwitt.plumbing import PlumbingGraph
from zhatwitt.qseries import QPoint


def naive_state_sum(graph, k, parities):
    """``sum_n J_n prod [n_r]`` over every coloring, without the tree recursion."""
    pt = QPoint(Fraction(1, k))
    with mpmath.workprec(128):
        s1 = pt.power(Fraction(1, 2)) - pt.power(Fraction(-1, 2))
        total = mpmath.mpc(0)
        for ns in itertools.product(*(wrt.colors(k, p) for p in parities)):
            t = wrt.colored_jones(graph, ns, k)
            for n in ns:
                t *= (pt.power(Fraction(n, 2)) - pt.power(Fraction(-n, 2))) / s1
            total += t
        return total


def test_colors():
    assert wrt.colors(3) == [1, 2, 4, 5]
    assert wrt.colors(6, 1) == [1, 3, 5, 7, 9, 11]
    assert wrt.colors(6, 0) == [2, 4, 8, 10]


@pytest.mark.parametrize("graph", [PlumbingGraph.star(-1, [[-2], [-3]]),
                                   PlumbingGraph.star(-2, [[-2, -2], [-3]]),
                                   PlumbingGraph.from_framings([-3, -3, -3], [(0, 1), (1, 2), (2, 0)])])
@pytest.mark.parametrize("k", [4, 6])
def test_state_sum_against_enumeration(graph, k):
    vectors = list(itertools.product((0, 1), repeat=graph.size))
    for parities in (vectors if graph.size <= 3 else vectors[::5]):
        got = wrt._state_sum(graph, k, list(parities), 128)
        assert abs(got - naive_state_sum(graph, k, parities)) < 1e-25


def test_refined_pieces_sum_to_unrefined():
    g = plumbing.load_corpus_graph("lens_p3")
    k = 6
    parts = sum(wrt._state_sum(g, k, [p], 128) for p in (0, 1))
    assert abs(parts - wrt._state_sum(g, k, [None], 128)) < 1e-30


def test_lens_two_values():
    g = PlumbingGraph.lens(2)
    assert abs(complex(wrt.wrt_refined_bruteforce(g, 6, (0,)).value) + 1) < 1e-20
    assert abs(complex(wrt.wrt_refined_bruteforce(g, 6, (1,)).value) - 3 ** 0.5) < 1e-20


def test_homology_sphere_invariant_is_one_at_level_six():
    for name in ("sigma_2_3_7",):
        g = plumbing.load_corpus_graph(name)
        v = wrt.wrt_refined_bruteforce(g, 6, (0,) * g.size)
        assert abs(complex(v.value) - 1) < 1e-15


@pytest.mark.parametrize("name", ["lens_p4", "lens_p6", "s3_m2_trefoil", "s3_p2_fig8"])
@pytest.mark.parametrize("k", [6, 10])
def test_bruteforce_matches_plumbed(name, k):
    g = plumbing.load_corpus_graph(name)
    for th in plumbing.theta_reps(g):
        bf = wrt.wrt_refined_bruteforce(g, k, th)
        pl = wrt.tau_from_zhat_plumbed(g, th, k)
        assert abs(complex(bf.value) - complex(pl.value)) < 1e-12


def test_plumbed_requires_k_2_mod_4():
    with pytest.raises(Exception):
        wrt.plumbed_phase_sums(plumbing.validate(PlumbingGraph.lens(2)), (0,), 8)


def test_denominator_vanishing_is_detected():
    with pytest.raises(DenominatorVanishes):
        wrt._sinh_factor(QPoint(Fraction(1, 6)), 12, 64)
    assert abs(wrt._sinh_factor(QPoint(Fraction(1, 6)), 12, 64, denominator=False)) < 1e-15


def test_odd_level_rejected():
    with pytest.raises(ValueError):
        wrt.wrt_refined_bruteforce(PlumbingGraph.lens(2), 5)


def test_cwrt_coefficients():
    p, k = 5, 6
    lk = wrt.lens_lk(p)
    assert lk == Fraction(-1, 5)
    c = wrt.cwrt_coeff(p, lk, 2, 3, k)
    want = mpmath.exp(-2j * mpmath.pi * k * float(lk) * 4) * mpmath.exp(4j * mpmath.pi * 6 / p) / mpmath.sqrt(p)
    assert abs(c - want) < 1e-12
    assert abs(wrt.cwrt_coeff(p, lambda a: Fraction(-a * a, p), 2, 3, k) - c) < 1e-30


def test_bruteforce_matches_plumbed_noncyclic():
    g = PlumbingGraph.star(-2, [[-2], [-2], [-2]])
    for th in plumbing.theta_reps(g):
        bf = wrt.wrt_refined_bruteforce(g, 6, th)
        pl = wrt.tau_from_zhat_plumbed(g, th, 6)
        assert abs(complex(bf.value) - complex(pl.value)) < 1e-12
