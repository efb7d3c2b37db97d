"""Exact truncated q-series and their evaluation inside the unit disk.

A :class:`QSeries` stores ``sum_n c_n q^(Delta + n/D)`` with exact
rational data.  Points of the disk are given as ``q = exp(2 pi i (u + i y))``
through :class:`QPoint` so that fractional powers have an unambiguous
branch.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import mpmath
from mpmath import mp, mpc, mpf

DEFAULT_PRECISION_BITS = 256


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**12)
    return Fraction(x)


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _lcm(*xs) -> int:
    out = 1
    for x in xs:
        out = out * x // math.gcd(out, x)
    return out


@dataclass(frozen=True)
class QSeries:
    """``sum_n coeffs[n] * q^(prefactor + n/denom)``, exact below the truncation.

    ``truncation`` is measured from ``prefactor``: every term with exponent
    below ``prefactor + truncation`` is known.
    """

    prefactor: Fraction
    denom: int
    coeffs: Mapping[int, Fraction]
    truncation: Fraction

    def __post_init__(self):
        object.__setattr__(self, "prefactor", _frac(self.prefactor))
        object.__setattr__(self, "truncation", _frac(self.truncation))
        if self.denom <= 0:
            raise ValueError("denom must be positive")
        cleaned = {}
        for n, c in sorted(self.coeffs.items()):
            c = _frac(c)
            if n < 0:
                raise ValueError("term offsets must be non-negative")
            if c and Fraction(n, self.denom) < self.truncation:
                cleaned[int(n)] = c
        object.__setattr__(self, "coeffs", cleaned)

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, truncation=Fraction(10**9)) -> "QSeries":
        return cls(Fraction(0), 1, {}, truncation)

    @classmethod
    def monomial(cls, coeff, exponent, truncation=Fraction(10**9)) -> "QSeries":
        return cls(_frac(exponent), 1, {0: _frac(coeff)}, truncation)

    @classmethod
    def from_terms(cls, terms: Iterable, cutoff) -> "QSeries":
        """Build from ``(absolute exponent, coeff)`` pairs known below ``cutoff``."""
        terms = [(_frac(e), _frac(c)) for e, c in terms]
        cutoff = _frac(cutoff)
        acc = {}
        for e, c in terms:
            if e < cutoff:
                acc[e] = acc.get(e, 0) + c
        acc = {e: c for e, c in acc.items() if c}
        if not acc:
            return cls(Fraction(0), 1, {}, cutoff)
        base = min(acc)
        D = _lcm(*[(e - base).denominator for e in acc])
        coeffs = {int((e - base) * D): c for e, c in acc.items()}
        return cls(base, D, coeffs, cutoff - base)

    # -- views ----------------------------------------------------------------

    @property
    def cutoff(self) -> Fraction:
        """Absolute exponent below which the series is exact."""
        return self.prefactor + self.truncation

    def terms(self) -> list:
        """Sorted ``(absolute exponent, coeff)`` pairs."""
        return [(self.prefactor + Fraction(n, self.denom), c) for n, c in self.coeffs.items()]

    def truncate(self, cutoff) -> "QSeries":
        cutoff = min(_frac(cutoff), self.cutoff)
        return QSeries.from_terms(self.terms(), cutoff)

    def canonical(self) -> "QSeries":
        return QSeries.from_terms(self.terms(), self.cutoff)

    def dyadic_exponent(self):
        """Smallest ``c`` with all ``2^c c_n`` integral, or None if not dyadic."""
        c = 0
        for x in self.coeffs.values():
            d = x.denominator
            k = (d & -d).bit_length() - 1
            if d != 1 << k:
                return None
            c = max(c, k)
        return c

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.terms() == other.terms() and self.cutoff == other.cutoff

    def __hash__(self):
        return hash((tuple(self.terms()), self.cutoff))

    def agrees_with(self, other: "QSeries", cutoff=None) -> bool:
        """Coefficientwise equality strictly below ``cutoff``."""
        top = min(self.cutoff, other.cutoff)
        if cutoff is not None:
            top = min(top, _frac(cutoff))
        a = [t for t in self.terms() if t[0] < top]
        b = [t for t in other.terms() if t[0] < top]
        return a == b

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        return series_add(self, other)

    def __neg__(self):
        return series_scale(self, -1)

    def __sub__(self, other):
        return series_add(self, series_scale(other, -1))

    def __rmul__(self, c):
        return series_scale(self, c)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {"prefactor": _frac_str(self.prefactor), "denom": self.denom,
                "coeffs": [[n, _frac_str(c)] for n, c in self.coeffs.items()],
                "truncation": _frac_str(self.truncation)}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, data: dict) -> "QSeries":
        return cls(Fraction(data["prefactor"]), int(data["denom"]),
                   {int(n): Fraction(c) for n, c in data["coeffs"]},
                   Fraction(data["truncation"]))

    @classmethod
    def loads(cls, text: str) -> "QSeries":
        return cls.from_json(json.loads(text))


def series_add(a: QSeries, b: QSeries) -> QSeries:
    cutoff = min(a.cutoff, b.cutoff)
    return QSeries.from_terms(a.terms() + b.terms(), cutoff)


def series_scale(s: QSeries, c) -> QSeries:
    c = _frac(c)
    return QSeries(s.prefactor, s.denom, {n: c * x for n, x in s.coeffs.items()}, s.truncation)


def series_shift(s: QSeries, e) -> QSeries:
    """Multiply by ``q^e``."""
    return QSeries(s.prefactor + _frac(e), s.denom, dict(s.coeffs), s.truncation)


def series_sum(items: Iterable, cutoff=None) -> QSeries:
    items = list(items)
    top = min(s.cutoff for s in items) if items else Fraction(10**9)
    if cutoff is not None:
        top = min(top, _frac(cutoff))
    return QSeries.from_terms([t for s in items for t in s.terms()], top)


# ---------------------------------------------------------------------------
# exact sums of roots of unity


@dataclass(frozen=True)
class RootSum:
    """Exact element ``sum_phi c_phi exp(2 pi i phi)`` with rational ``phi`` mod 1."""

    terms: Mapping[Fraction, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        acc = {}
        for ph, c in self.terms.items():
            ph = _frac(ph) % 1
            acc[ph] = acc.get(ph, 0) + _frac(c)
        object.__setattr__(self, "terms", {k: v for k, v in sorted(acc.items()) if v})

    @classmethod
    def root(cls, phase, coeff=1) -> "RootSum":
        return cls({_frac(phase): _frac(coeff)})

    def __add__(self, other):
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return RootSum(t)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "RootSum":
        c = _frac(c)
        return RootSum({k: c * v for k, v in self.terms.items()})

    def rotate(self, phase) -> "RootSum":
        phase = _frac(phase)
        return RootSum({k + phase: v for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, RootSum):
            return self.scale(other)
        t = {}
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                k = (a + b) % 1
                t[k] = t.get(k, 0) + x * y
        return RootSum(t)

    @property
    def order(self) -> int:
        return _lcm(*[k.denominator for k in self.terms]) if self.terms else 1

    def to_complex(self, prec: int = DEFAULT_PRECISION_BITS) -> mpc:
        with mp.workprec(prec):
            tot = mpc(0)
            for ph, c in self.terms.items():
                tot += mpf(c.numerator) / c.denominator * mpmath.expjpi(
                    2 * mpf(ph.numerator) / ph.denominator)
            return +tot


# ---------------------------------------------------------------------------
# high-precision complex values and evaluation


@dataclass(frozen=True)
class ComplexHP:
    value: mpc
    err: mpf
    precision_bits: int = DEFAULT_PRECISION_BITS

    @property
    def re(self):
        return self.value.real

    @property
    def im(self):
        return self.value.imag

    def __complex__(self):
        return complex(self.value)

    def __abs__(self):
        return abs(self.value)

    def __add__(self, other):
        other = _as_hp(other, self.precision_bits)
        return ComplexHP(self.value + other.value, self.err + other.err,
                         min(self.precision_bits, other.precision_bits))

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_hp(other, self.precision_bits)
        return ComplexHP(self.value - other.value, self.err + other.err,
                         min(self.precision_bits, other.precision_bits))

    def __mul__(self, other):
        other = _as_hp(other, self.precision_bits)
        err = abs(self.value) * other.err + abs(other.value) * self.err + self.err * other.err
        return ComplexHP(self.value * other.value, err,
                         min(self.precision_bits, other.precision_bits))

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {"re": float(self.re), "im": float(self.im), "err": float(self.err)}


def _as_hp(x, prec) -> ComplexHP:
    if isinstance(x, ComplexHP):
        return x
    return ComplexHP(mpc(x), mpf(0), prec)


@dataclass(frozen=True)
class QPoint:
    """``q = exp(2 pi i (u + i y))`` with rational ``u`` and ``y >= 0``."""

    u: Fraction
    y: object = 0

    def __post_init__(self):
        object.__setattr__(self, "u", _frac(self.u))
        if isinstance(self.y, Fraction):
            object.__setattr__(self, "y", mpf(self.y.numerator) / self.y.denominator)

    def power(self, e: Fraction, prec: int = DEFAULT_PRECISION_BITS) -> mpc:
        """``q^e`` on the branch fixed by ``(u, y)``."""
        e = _frac(e)
        with mp.workprec(prec):
            ph = (self.u * e) % 1
            z = mpmath.expjpi(2 * mpf(ph.numerator) / ph.denominator)
            if self.y:
                z *= mpmath.exp(-2 * mpmath.pi * mpf(self.y) * mpf(e.numerator) / e.denominator)
            return +z

    @property
    def modulus(self):
        return mpmath.exp(-2 * mpmath.pi * mpf(self.y))


def evaluate(s: QSeries, q, prec: int = DEFAULT_PRECISION_BITS) -> ComplexHP:
    """Evaluate the stored terms at ``q``.

    ``q`` is a :class:`QPoint` or a complex number with ``|q| <= 1``
    (principal branch for fractional powers).  On the unit circle the value
    is the plain partial sum.  Inside the disk ``err`` also contains a
    geometric tail bound built from the largest retained coefficient.
    """
    with mp.workprec(prec + 20):
        if isinstance(q, QPoint):
            point = q
            base = point.power(s.prefactor, prec + 20)
            step = point.power(Fraction(1, s.denom), prec + 20)
            modulus = point.modulus
        else:
            qc = mpc(q)
            if abs(qc) > 1:
                raise ValueError("|q| must not exceed 1")
            logq = mpmath.log(qc) if qc != 0 else None
            if logq is None:
                return _evaluate_at_zero(s, prec)
            base = mpmath.exp(logq * mpf(s.prefactor.numerator) / s.prefactor.denominator)
            step = mpmath.exp(logq / s.denom)
            modulus = abs(qc)
        tot = mpc(0)
        scale = mpf(0)
        last = 0
        cur = mpc(1)
        for n, c in s.coeffs.items():
            cur *= step ** (n - last)
            last = n
            term = mpf(c.numerator) / c.denominator * cur
            tot += term
            scale += abs(term)
        tot *= base
        scale *= abs(base)
        err = scale * mpf(2) ** (-prec) * (len(s.coeffs) + 1)
        if modulus < 1 and s.coeffs:
            cmax = max(abs(mpf(c.numerator) / c.denominator) for c in s.coeffs.values())
            tail = cmax * modulus ** (mpf(s.cutoff.numerator) / s.cutoff.denominator)
            tail /= 1 - modulus ** (mpf(1) / s.denom)
            err += tail
        return ComplexHP(+tot, +err, prec)


def _evaluate_at_zero(s: QSeries, prec) -> ComplexHP:
    c = s.coeffs.get(0, Fraction(0)) if s.prefactor == 0 else Fraction(0)
    return ComplexHP(mpc(mpf(c.numerator) / c.denominator), mpf(0), prec)


def evaluate_partial_sums(s: QSeries, u, ys, truncations=None,
                          prec: int = 64, backend: str = "mpmath") -> dict:
    """Partial sums at ``q = exp(2 pi i (u + i y))`` for many ``(N, y)`` at once.

    ``truncations`` are absolute exponent bounds (terms with exponent
    ``<= N`` are kept); None means all stored terms.  Phases are reduced
    exactly before conversion, so large exponents are harmless.  Returns
    ``{(N, y): complex}``.
    """
    u = _frac(u)
    terms = s.terms()
    exps = [e for e, _ in terms]
    truncations = [None] if truncations is None else list(truncations)
    ys = list(ys)
    out = {}
    if backend == "numpy":
        import numpy as np

        ph = np.array([float((u * e) % 1) for e in exps])
        cf = np.array([float(c) for _, c in terms])
        ex = np.array([float(e) for e in exps])
        z = cf * np.exp(2j * np.pi * ph)
        for y in ys:
            damp = np.exp(-2 * np.pi * float(y) * ex)
            vals = z * damp
            csum = np.cumsum(vals)
            for N in truncations:
                k = len(exps) if N is None else int(np.searchsorted(ex, float(N), side="right"))
                out[(N, y)] = complex(csum[k - 1]) if k else 0j
        return out
    with mp.workprec(prec):
        z = []
        for e, c in terms:
            phs = (u * e) % 1
            z.append(mpf(c.numerator) / c.denominator
                     * mpmath.expjpi(2 * mpf(phs.numerator) / phs.denominator))
        for y in ys:
            yy = mpf(y)
            run, partial = mpc(0), []
            for (e, _), zz in zip(terms, z):
                run += zz * mpmath.exp(-2 * mpmath.pi * yy * mpf(e.numerator) / e.denominator)
                partial.append((e, +run))
            for N in truncations:
                val = mpc(0)
                for e, v in partial:
                    if N is not None and e > N:
                        break
                    val = v
                out[(N, y)] = complex(val)
    return out
