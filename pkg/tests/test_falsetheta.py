import cmath
from fractions import Fraction

import pytest

from zhatwitt import falsetheta as ft
from zhatwitt.errors import ValidationError


def direct_psi(m, r, k):
    N = 2 * m * k
    return sum((0.5 - n / N) * ft.psi_char(m, r, n) * cmath.exp(1j * cmath.pi * n * n / N)
               for n in range(1, N + 1))


def direct_phi(m, r, k):
    N = 2 * m * k
    return -(m * k) * sum(((n / N) ** 2 - n / N + 1 / 6) * ft.psi_prime_char(m, r, n)
                          * cmath.exp(1j * cmath.pi * n * n / N) for n in range(1, N + 1))


GRID = [(m, r, k) for m in (6, 12, 30) for r in (1, 5, 7) if r < m for k in (2, 3, 6, 8)]


@pytest.mark.parametrize("m,r,k", GRID)
def test_psi_root_value(m, r, k):
    v = ft.psi_at_root(m, r, k)
    assert abs(complex(v.value) - direct_psi(m, r, k)) < 1e-10
    assert v.err < 1e-60


@pytest.mark.parametrize("m,r,k", GRID[::3])
def test_phi_and_b_root_values(m, r, k):
    assert abs(complex(ft.phi_at_root(m, r, k).value) - direct_phi(m, r, k)) < 1e-9
    b = complex(ft.b_function_at_root(m, r, k).value)
    assert abs(b - (direct_phi(m, r, k) - r * direct_psi(m, r, k)) / (2 * m)) < 1e-9


def test_exact_value_is_root_sum():
    rs = ft.psi_at_root(6, 1, 6, exact=True)
    assert rs.terms == {Fraction(1, 144): Fraction(35, 36), Fraction(25, 144): Fraction(23, 36),
                        Fraction(49, 144): Fraction(11, 36), Fraction(73, 144): Fraction(-1, 36),
                        Fraction(97, 144): Fraction(-13, 36), Fraction(121, 144): Fraction(-25, 36)}


def test_characters():
    assert [ft.psi_char(6, 1, n) for n in (1, 11, 13, 23, 2)] == [1, -1, 1, -1, 0]
    assert [ft.psi_prime_char(6, 1, n) for n in (1, 11, 13, 2)] == [1, 1, 1, 0]


def test_psi_series_is_partial_theta():
    s = ft.psi_qseries(6, 1, 30)
    # sum over n = +-1 mod 12 of psi(n) q^{n^2/24}, n >= 1
    want = [(Fraction(n * n, 24), ft.psi_char(6, 1, n)) for n in range(1, 40) if ft.psi_char(6, 1, n)]
    assert s.terms() == [t for t in want if t[0] < s.cutoff]


def test_phi_series_weights():
    s = ft.phi_qseries(6, 1, 10)
    assert s.terms()[:3] == [(Fraction(1, 24), 1), (Fraction(121, 24), 11), (Fraction(169, 24), 13)]


def test_term_and_combination_json():
    form = ft.PsiCombination(Fraction(1, 3), (ft.Term(Fraction(2), "psi", 6, 1),
                                              ft.Term(Fraction(-1), "B", 30, 7, Fraction(1, 2))), "x")
    back = ft.PsiCombination.from_json(form.to_json())
    assert back == form
    assert back.series(20) == form.series(20)
    assert back.limit(6) == form.limit(6)


def test_psi_combo_shorthand():
    c = ft.psi_combo("1/2", [(1, 6, 1), (-1, 6, 5)])
    assert c.prefactor == Fraction(1, 2) and len(c.terms) == 2


def test_surgery_family_lookup():
    fam = ft.surgery_family("T(2, 3)")
    assert fam.brieskorn(2) == (2, 3, 13)
    assert fam.form(1).prefactor == Fraction(83, 168)
    with pytest.raises(ValidationError):
        ft.surgery_family("T(4,5)")
    with pytest.raises(ValidationError):
        fam.form(0)


@pytest.mark.parametrize("knot", sorted(ft.SURGERY_FAMILIES))
def test_every_family_is_a_homology_sphere_series(knot):
    for r in (1, 2):
        s = ft.surgery_family(knot).form(r).series(60)
        assert s.terms(), knot
        assert all(c.denominator == 1 for _, c in s.terms())


def test_mirror_pairs_are_conjugate_at_roots():
    for a, b in ft.MIRROR_PAIRS:
        for r in (1, 2):
            va = complex(ft.surgery_family(a).form(r).value_at_root(6))
            vb = complex(ft.surgery_family(b).form(r).value_at_root(6))
            assert abs(abs(va) - abs(vb)) < 1e-12


def test_seifert_forms_from_manifest():
    forms = ft.seifert_forms()
    assert set(forms) >= {"s3_m2_trefoil", "seifert_4fiber"}
    assert forms["seifert_4fiber"][1].terms == ()
