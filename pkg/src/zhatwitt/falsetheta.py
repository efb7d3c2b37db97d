"""False theta functions: root-of-unity values, q-series, and closed forms.

``Psi_{m,r}(q) = sum_{n >= 0} psi^{(r)}_{2m}(n) q^{n^2 / 4m}`` where
``psi^{(r)}_{2m}(n)`` is +1 for ``n = r`` and -1 for ``n = -r`` (mod 2m).
``Phi_{m,r}(q) = sum_{n >= 0} n psi'^{(r)}_{2m}(n) q^{n^2/4m}`` uses the
unsigned character, and ``B_{m,r} = (Phi_{m,r} - r Psi_{m,r}) / 2m``.

The values at ``q = exp(2 pi i / k)`` are the constant terms of the radial
asymptotic expansion, which are the finite sums below.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from mpmath import mp, mpf

from .errors import ValidationError
from .qseries import (DEFAULT_PRECISION_BITS, ComplexHP, QSeries, RootSum, series_scale,
                      series_shift, series_sum)


def psi_char(m: int, r: int, n: int) -> int:
    M = 2 * m
    return int((n - r) % M == 0) - int((n + r) % M == 0)


def psi_prime_char(m: int, r: int, n: int) -> int:
    M = 2 * m
    return int((n - r) % M == 0 or (n + r) % M == 0)


def _check(m, r, k):
    if m < 1 or k < 1:
        raise ValidationError("need m >= 1 and k >= 1")


def psi_root_sum(m: int, r: int, k: int) -> RootSum:
    """Exact ``Psi_{m,r}(e^{2 pi i/k})`` as a sum of roots of unity."""
    _check(m, r, k)
    N = 2 * m * k
    terms = {}
    for n in range(1, N + 1):
        ch = psi_char(m, r, n)
        if ch:
            ph = Fraction(n * n % (2 * N), 2 * N)
            terms[ph] = terms.get(ph, 0) + ch * (Fraction(1, 2) - Fraction(n, N))
    return RootSum(terms)


def phi_root_sum(m: int, r: int, k: int) -> RootSum:
    """Exact ``Phi_{m,r}(e^{2 pi i/k})``."""
    _check(m, r, k)
    N = 2 * m * k
    terms = {}
    for n in range(1, N + 1):
        if psi_prime_char(m, r, n):
            x = Fraction(n, N)
            ph = Fraction(n * n % (2 * N), 2 * N)
            terms[ph] = terms.get(ph, 0) - m * k * (x * x - x + Fraction(1, 6))
    return RootSum(terms)


def b_root_sum(m: int, r: int, k: int) -> RootSum:
    return (phi_root_sum(m, r, k) - psi_root_sum(m, r, k).scale(r)).scale(Fraction(1, 2 * m))


def _as_value(rs: RootSum, exact: bool, prec: int):
    if exact:
        return rs
    with mp.workprec(prec):
        v = rs.to_complex(prec + 20)
        err = mpf(2) ** (-prec) * (len(rs.terms) + 1) * max(
            [abs(mpf(c.numerator) / c.denominator) for c in rs.terms.values()] or [0])
        return ComplexHP(+v, err, prec)


def psi_at_root(m: int, r: int, k: int, exact: bool = False, prec: int = DEFAULT_PRECISION_BITS):
    """``sum_{n=1}^{2mk} (1/2 - n/2mk) psi(n) exp(i pi n^2 / 2mk)``.

    With ``exact=True`` the value is returned as a :class:`RootSum`.
    """
    return _as_value(psi_root_sum(m, r, k), exact, prec)


def phi_at_root(m: int, r: int, k: int, exact: bool = False, prec: int = DEFAULT_PRECISION_BITS):
    """``-(mk) sum_{n=1}^{2mk} ((n/2mk)^2 - n/2mk + 1/6) psi'(n) exp(i pi n^2 / 2mk)``."""
    return _as_value(phi_root_sum(m, r, k), exact, prec)


def b_function_at_root(m: int, r: int, k: int, exact: bool = False,
                       prec: int = DEFAULT_PRECISION_BITS):
    """``(Phi_{m,r} - r Psi_{m,r}) / 2m`` at ``exp(2 pi i / k)``."""
    return _as_value(b_root_sum(m, r, k), exact, prec)


def _theta_terms(m, r, q_max, weight):
    """``(n^2/4m, weight(n))`` for ``n >= 0`` with ``n = +-r mod 2m`` and ``n^2/4m < q_max``."""
    q_max = Fraction(q_max)
    M = 2 * m
    top = math.isqrt(int(4 * m * q_max)) + 1
    residues = sorted({r % M, (-r) % M})
    out = []
    for base in range(0, top + 1, M):
        for res in residues:
            n = base + res
            e = Fraction(n * n, 4 * m)
            if e >= q_max:
                continue
            c = weight(n)
            if c:
                out.append((e, c))
    return out


def psi_qseries(m: int, r: int, q_max) -> QSeries:
    """Partial theta series ``sum_{n>=0} psi(n) q^{n^2/4m}`` below ``q^q_max``."""
    return QSeries.from_terms(_theta_terms(m, r, q_max, lambda n: psi_char(m, r, n)), q_max)


def phi_qseries(m: int, r: int, q_max) -> QSeries:
    return QSeries.from_terms(_theta_terms(m, r, q_max, lambda n: n * psi_prime_char(m, r, n)), q_max)


def b_qseries(m: int, r: int, q_max) -> QSeries:
    return QSeries.from_terms(_theta_terms(
        m, r, q_max,
        lambda n: Fraction(n * psi_prime_char(m, r, n) - r * psi_char(m, r, n), 2 * m)), q_max)


# ---------------------------------------------------------------------------
# closed forms built from Psi / B


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    kind: str  # "psi", "B", "phi" or "const"
    m: int = 0
    r: int = 0
    shift: Fraction = Fraction(0)

    def series(self, q_max) -> QSeries:
        q_max = Fraction(q_max) - self.shift
        if self.kind == "const":
            s = QSeries.monomial(1, 0, q_max)
        else:
            s = {"psi": psi_qseries, "B": b_qseries, "phi": phi_qseries}[self.kind](self.m, self.r, q_max)
        return series_shift(series_scale(s, self.coeff), self.shift)

    def root_sum(self, k: int) -> RootSum:
        if self.kind == "const":
            base = RootSum.root(0)
        else:
            base = {"psi": psi_root_sum, "B": b_root_sum, "phi": phi_root_sum}[self.kind](self.m, self.r, k)
        return base.scale(self.coeff).rotate(self.shift / k)


@dataclass(frozen=True)
class PsiCombination:
    """``q^prefactor * sum_i coeff_i q^shift_i X_i(q)`` with ``X_i`` in {Psi, B, Phi, 1}."""

    prefactor: Fraction
    terms: tuple = field(default_factory=tuple)
    label: str = ""

    def series(self, q_max) -> QSeries:
        """Expansion with relative exponents below ``q_max``."""
        if not self.terms:
            return QSeries.from_terms([], self.prefactor + Fraction(q_max))
        parts = [t.series(q_max) for t in self.terms]
        return series_shift(series_sum(parts, cutoff=Fraction(q_max)), self.prefactor)

    def limit(self, k: int) -> RootSum:
        tot = RootSum()
        for t in self.terms:
            tot = tot + t.root_sum(k)
        return tot.rotate(self.prefactor / k)

    def value_at_root(self, k: int, prec: int = DEFAULT_PRECISION_BITS):
        return self.limit(k).to_complex(prec)

    @classmethod
    def from_json(cls, data: dict) -> "PsiCombination":
        terms = tuple(Term(Fraction(t[0]), t[1], int(t[2]) if len(t) > 2 else 0,
                           int(t[3]) if len(t) > 3 else 0,
                           Fraction(t[4]) if len(t) > 4 else Fraction(0))
                      for t in data["terms"])
        return cls(Fraction(data["prefactor"]), terms, data.get("label", ""))

    def to_json(self) -> dict:
        return {"prefactor": str(self.prefactor), "label": self.label,
                "terms": [[str(t.coeff), t.kind, t.m, t.r, str(t.shift)] for t in self.terms]}


def psi_combo(prefactor, pairs, label="") -> PsiCombination:
    """Shorthand: ``pairs`` is ``[(sign, m, r), ...]`` of weight-3/2 terms."""
    return PsiCombination(Fraction(prefactor),
                          tuple(Term(Fraction(s), "psi", m, r) for s, m, r in pairs), label)


# ---------------------------------------------------------------------------
# -1/r surgeries on torus knots


@dataclass(frozen=True)
class SurgeryFamily:
    """``Ẑ[S^3_{-1/r}(K)]`` as ``q^Delta (Psi_1 - Psi_2 - Psi_3 + Psi_4)`` at modulus ``m(r)``."""

    knot: str
    prefactor: object  # r -> Fraction
    modulus: object  # r -> int
    residues: object  # r -> 4-tuple
    brieskorn: object  # r -> (a1, a2, a3)
    extra: object = None  # r -> list of Term, for sporadic corrections

    def form(self, r: int) -> PsiCombination:
        if r < 1:
            raise ValidationError("surgery parameter r must be >= 1")
        m = self.modulus(r)
        signs = (1, -1, -1, 1)
        terms = [Term(Fraction(s), "psi", m, res) for s, res in zip(signs, self.residues(r))]
        if self.extra is not None:
            terms += list(self.extra(r))
        return PsiCombination(Fraction(self.prefactor(r)), tuple(terms), f"{self.knot}, r={r}")


def _poincare_correction(r):
    # the r = 1 member is the Poincare sphere, whose Ẑ carries an extra 2 q^{-3/2}
    if r != 1:
        return []
    return [Term(Fraction(2), "const", shift=Fraction(-3, 2) - Fraction(-181, 120))]


SURGERY_FAMILIES = {
    "T(2,3)": SurgeryFamily(
        "T(2,3)", lambda r: Fraction(1, 2) - Fraction((6 * r - 5) ** 2, 24 * (6 * r + 1)),
        lambda r: 6 * (6 * r + 1),
        lambda r: (6 * r - 5, 6 * r + 7, 30 * r - 1, 30 * r + 11),
        lambda r: (2, 3, 6 * r + 1)),
    "T(2,-3)": SurgeryFamily(
        "T(2,-3)", lambda r: Fraction(-1, 2) - Fraction((6 * r + 5) ** 2, 24 * (6 * r - 1)),
        lambda r: 6 * (6 * r - 1),
        lambda r: (6 * r - 7, 6 * r + 5, 30 * r - 11, 30 * r + 1),
        lambda r: (2, 3, 6 * r - 1), _poincare_correction),
    "T(2,5)": SurgeryFamily(
        "T(2,5)", lambda r: Fraction(71, 40) - Fraction(r, 4) - Fraction(5, 2 + 20 * r),
        lambda r: 100 * r + 10,
        lambda r: (30 * r - 7, 30 * r + 13, 70 * r - 3, 70 * r + 17),
        lambda r: (2, 5, 10 * r + 1)),
    "T(2,7)": SurgeryFamily(
        "T(2,7)", lambda r: Fraction(143, 56) - Fraction(r, 4) - Fraction(7, 2 + 28 * r),
        lambda r: 196 * r + 14,
        lambda r: (70 * r - 9, 70 * r + 19, 126 * r - 5, 126 * r + 23),
        lambda r: (2, 7, 14 * r + 1)),
    "T(3,5)": SurgeryFamily(
        "T(3,5)", lambda r: Fraction(191, 60) - Fraction(r, 4) - Fraction(15, 4 + 60 * r),
        lambda r: 225 * r + 15,
        lambda r: (105 * r - 8, 105 * r + 22, 195 * r - 2, 195 * r + 28),
        lambda r: (3, 5, 15 * r + 1)),
    "T(3,7)": SurgeryFamily(
        "T(3,7)", lambda r: Fraction(383, 84) - Fraction(r, 4) - Fraction(21, 4 + 84 * r),
        lambda r: 441 * r + 21,
        lambda r: (231 * r - 10, 231 * r + 32, 357 * r - 4, 357 * r + 38),
        lambda r: (3, 7, 21 * r + 1)),
    "T(2,-5)": SurgeryFamily(
        "T(2,-5)", lambda r: Fraction(-71, 40) + Fraction(5, 2 - 20 * r) - Fraction(r, 4),
        lambda r: 100 * r - 10,
        lambda r: (30 * r - 13, 30 * r + 7, 70 * r - 17, 70 * r + 3),
        lambda r: (2, 5, 10 * r - 1)),
    "T(2,-7)": SurgeryFamily(
        "T(2,-7)", lambda r: Fraction(-143, 56) + Fraction(7, 2 - 28 * r) - Fraction(r, 4),
        lambda r: 196 * r - 14,
        lambda r: (70 * r - 19, 70 * r + 9, 126 * r - 23, 126 * r + 5),
        lambda r: (2, 7, 14 * r - 1)),
    "T(3,-5)": SurgeryFamily(
        "T(3,-5)", lambda r: Fraction(-191, 60) + Fraction(15, 4 - 60 * r) - Fraction(r, 4),
        lambda r: 225 * r - 15,
        lambda r: (105 * r - 22, 105 * r + 8, 195 * r - 28, 195 * r + 2),
        lambda r: (3, 5, 15 * r - 1)),
    "T(3,-7)": SurgeryFamily(
        "T(3,-7)", lambda r: Fraction(-383, 84) + Fraction(21, 4 - 84 * r) - Fraction(r, 4),
        lambda r: 441 * r - 21,
        lambda r: (231 * r - 32, 231 * r + 10, 357 * r - 38, 357 * r + 4),
        lambda r: (3, 7, 21 * r - 1)),
}

TORUS_FAMILIES = ("T(2,5)", "T(2,7)", "T(3,5)", "T(3,7)",
                     "T(2,-5)", "T(2,-7)", "T(3,-5)", "T(3,-7)")
MIRROR_PAIRS = (("T(2,3)", "T(2,-3)"), ("T(2,5)", "T(2,-5)"), ("T(2,7)", "T(2,-7)"),
                ("T(3,5)", "T(3,-5)"), ("T(3,7)", "T(3,-7)"))


def surgery_family(knot: str) -> SurgeryFamily:
    key = knot.replace(" ", "")
    if key not in SURGERY_FAMILIES:
        raise ValidationError(f"unknown surgery family {knot!r}; known: {sorted(SURGERY_FAMILIES)}")
    return SURGERY_FAMILIES[key]


def torus_surgery_zhat(knot: str, r: int, q_max) -> QSeries:
    return surgery_family(knot).form(r).series(q_max)


def poincare_form() -> PsiCombination:
    """``q^{-3/2} (2 - sum chi_+(n) q^{(n^2-1)/120})`` in Psi_{30} language."""
    return PsiCombination(Fraction(-181, 120), (
        Term(Fraction(2), "const", shift=Fraction(1, 120)),
        Term(Fraction(-1), "psi", 30, 1), Term(Fraction(-1), "psi", 30, 11),
        Term(Fraction(-1), "psi", 30, 19), Term(Fraction(-1), "psi", 30, 29)), "Sigma(2,3,5)")


# ---------------------------------------------------------------------------
# closed forms for the bundled Seifert examples


def seifert_forms() -> dict:
    """``{manifold: {label: PsiCombination}}`` from the bundled corpus manifest."""
    data = json.loads((resources.files("zhatwitt") / "corpus" / "manifolds.json").read_text())
    out = {}
    for name, entry in data.items():
        forms = entry.get("closed_forms")
        if forms:
            out[name] = {f["label"]: PsiCombination.from_json(f) for f in forms}
    return out
