"""The Ẑ engine for negative definite plumbings.

``Ẑ_b(q) = (-1)^{b_+} q^{(3 sigma - tr B)/4} sum_w F_w q^{-(w, B^{-1} w)/4}``
with ``w`` running over ``b + 2 B Z^L`` and ``F_w`` the product of
principal-value Laurent coefficients of ``(z - 1/z)^{2 - deg(v)}``.

Only vertices of degree three or more have infinite support, so the sum is
enumerated by fixing the finitely many choices on the other vertices and
running Fincke-Pohst on the remaining coordinates.

For graphs with at most one such vertex the radial limit at
``q -> exp(2 pi i / k)`` is computed exactly (see :func:`zhat_limits`).
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache

import mpmath

from . import linalg
from .errors import MissingLimitValue, NonConvergence, ValidationError
from .plumbing import (HomologyData, SpinCClass, conjugation_orbits,
                       spinc_reps, validate)
from .qseries import QSeries, RootSum


def pv_coefficient(deg: int, w: int) -> Fraction:
    """Coefficient of ``z^w`` in the symmetrized ``(z - 1/z)^(2 - deg)``.

    For ``deg >= 3`` this is the average of the expansions around ``z = 0``
    and ``z = infinity``, which gives entries in ``Z/2``.
    """
    m = 2 - deg
    if m >= 0:
        if (m - w) % 2 or abs(w) > m:
            return Fraction(0)
        j = (m - w) // 2
        return Fraction((-1) ** j * math.comb(m, j))
    m = -m
    if (w - m) % 2:
        return Fraction(0)
    if w >= m:
        j = (w - m) // 2
        return Fraction((-1) ** m * math.comb(m + j - 1, j), 2)
    if w <= -m:
        j = (-w - m) // 2
        return Fraction(math.comb(m + j - 1, j), 2)
    return Fraction(0)


def _finite_support(deg: int) -> list:
    m = 2 - deg
    return [w for w in range(-m, m + 1) if pv_coefficient(deg, w)]


def prefactor_exponent(hd: HomologyData) -> Fraction:
    tr = sum(hd.B[i][i] for i in range(len(hd.B)))
    return Fraction(3 * hd.signature - tr, 4)


def _sub(M, rows, cols):
    return [[M[i][j] for j in cols] for i in rows]


def _lattice_points(hd: HomologyData, q_max: Fraction):
    """Yield ``(w, F_w, exponent)`` with ``F_w != 0`` and exponent ``< q_max``."""
    graph = hd.graph
    deg = graph.degrees
    L = graph.size
    M = [[-x for x in row] for row in hd.Binv]
    hubs = [i for i in range(L) if deg[i] >= 3]
    rest = [i for i in range(L) if deg[i] < 3]
    supports = [_finite_support(deg[i]) for i in rest]
    if hubs:
        Mhh = _sub(M, hubs, hubs)
        Mhh_inv = linalg.rational_inverse(Mhh)
        Mhu = _sub(M, hubs, rest)
        G = [[x / 4 for x in row] for row in Mhh]
        # Schur complement gives the part of the exponent independent of the hubs
        Muu = _sub(M, rest, rest)
        Muh = _sub(M, rest, hubs)
        K = [[sum(Mhh_inv[a][b] * Mhu[b][j] for b in range(len(hubs))) for j in range(len(rest))]
             for a in range(len(hubs))]
        schur = [[Muu[i][j] - sum(Muh[i][a] * K[a][j] for a in range(len(hubs)))
                  for j in range(len(rest))] for i in range(len(rest))]
    for u in itertools.product(*supports):
        fu = Fraction(1)
        for i, x in zip(rest, u):
            fu *= pv_coefficient(deg[i], x)
        if not hubs:
            e = linalg.quadratic_exponent(hd.Binv, u)
            if e < q_max:
                yield tuple(u), fu, e
            continue
        center = [-sum(K[a][j] * u[j] for j in range(len(rest))) for a in range(len(hubs))]
        const = sum(u[i] * schur[i][j] * u[j] for i in range(len(rest))
                    for j in range(len(rest))) / 4
        for h in linalg.fincke_pohst(G, center, q_max - const):
            coef = fu
            for a, i in enumerate(hubs):
                coef *= pv_coefficient(deg[i], h[a])
                if not coef:
                    break
            if not coef:
                continue
            w = [0] * L
            for i, x in zip(rest, u):
                w[i] = x
            for i, x in zip(hubs, h):
                w[i] = x
            e = linalg.quadratic_exponent(hd.Binv, w)
            if e < q_max:
                yield tuple(w), coef, e


def zhat_all(graph, q_max, weak: bool = False) -> list:
    """Ẑ for every Spin^c class.

    Parameters
    ----------
    graph : PlumbingGraph or HomologyData
    q_max : rational
        Lattice exponents below ``q_max`` (measured from the prefactor
        ``q^{(3 sigma - tr B)/4}``) are included, so the result is exact for
        absolute exponents below ``(3 sigma - tr B)/4 + q_max``.

    Returns
    -------
    list
        ``[(SpinCClass, QSeries), ...]`` in canonical class order.
    """
    hd = graph if isinstance(graph, HomologyData) else validate(graph, weak=weak)
    q_max = Fraction(q_max)
    if q_max <= 0:
        raise ValidationError("q_max must be positive")
    classes = spinc_reps(hd)
    where = {c.key: c.index for c in classes}
    pre = prefactor_exponent(hd)
    sign = -1 if hd.b_plus % 2 else 1
    buckets = [dict() for _ in classes]
    for w, f, e in _lattice_points(hd, q_max):
        d = buckets[where[hd.key(w)]]
        d[e + pre] = d.get(e + pre, 0) + sign * f
    return [(c, QSeries.from_terms(b.items(), pre + q_max)) for c, b in zip(classes, buckets)]


def _resolve_class(hd: HomologyData, classes, b) -> SpinCClass:
    if isinstance(b, SpinCClass):
        return classes[b.index]
    if isinstance(b, int):
        return classes[b]
    key = hd.key(b)
    if any((x - d) % 2 for x, d in zip(b, hd.graph.delta)):
        raise ValidationError("Spin^c representative must be congruent to deg mod 2")
    return next(c for c in classes if c.key == key)


def zhat(graph, b, q_max, weak: bool = False) -> QSeries:
    """Ẑ_b for one class, given as a SpinCClass, class index or vector ``b``."""
    hd = graph if isinstance(graph, HomologyData) else validate(graph, weak=weak)
    allz = zhat_all(hd, q_max)
    cls = _resolve_class(hd, [c for c, _ in allz], b)
    return allz[cls.index][1]


def folded_zhat(graph, q_max) -> list:
    """``[(orbit, Ẑ_b + Ẑ_{-b})]`` over conjugation orbits; self-conjugate orbits are not doubled."""
    allz = zhat_all(graph, q_max)
    orbits = conjugation_orbits([c for c, _ in allz])
    out = []
    for orb in orbits:
        s = allz[orb[0]][1]
        for i in orb[1:]:
            s = s + allz[i][1]
        out.append((orb, s))
    return out


# ---------------------------------------------------------------------------
# exact radial limits


@lru_cache(maxsize=None)
def bernoulli_number(n: int) -> Fraction:
    """``B_n`` with ``B_1 = -1/2``."""
    if n == 0:
        return Fraction(1)
    return -sum(math.comb(n + 1, k) * bernoulli_number(k) for k in range(n)) / (n + 1)


def bernoulli_poly(n: int, x: Fraction) -> Fraction:
    return sum(math.comb(n, k) * bernoulli_number(k) * x ** (n - k) for k in range(n + 1))


def hurwitz_zeta_negint(l: int, a: Fraction) -> Fraction:
    """``zeta(-l, a) = -B_{l+1}(a) / (l + 1)`` for ``a > 0``."""
    return -bernoulli_poly(l + 1, a) / (l + 1)


def _poly_shift(coeffs, x0):
    """Coefficients of ``p(x - x0)`` in powers of x, for ``p`` given low-to-high."""
    out = [Fraction(0)] * len(coeffs)
    for n, c in enumerate(coeffs):
        for l in range(n + 1):
            out[l] += c * math.comb(n, l) * (-x0) ** (n - l)
    return out


def _binomial_poly(m: int) -> list:
    """Coefficients in j of ``C(m + j - 1, j) = prod_{i<m} (j + i) / (m - 1)!``."""
    poly = [Fraction(1)]
    for i in range(1, m):
        nxt = [Fraction(0)] * (len(poly) + 1)
        for d, c in enumerate(poly):
            nxt[d] += c * i
            nxt[d + 1] += c
        poly = nxt
    f = math.factorial(m - 1)
    return [c / f for c in poly]


def _phase_period(alpha: Fraction, beta: Fraction, k: int, base: int) -> int:
    """Smallest multiple P of ``base`` with ``E(j + P) - E(j)`` in ``k Z`` for all j."""
    P = base
    while True:
        if (2 * alpha * P / k).denominator == 1 and ((alpha * P * P + beta * P) / k).denominator == 1:
            return P
        P += base


def zhat_limits(graph, k: int, weak: bool = False, tol: float = 1e-20) -> dict:
    """Exact ``lim_{q -> exp(2 pi i/k)} Ẑ_b(q)`` for every class.

    Supported when at most one vertex has degree three or more.  Each ray
    ``w_h = s (m + 2 j)`` of the hub coordinate contributes
    ``sum_j P(j) chi(j) q^{alpha (j + x0)^2 + gamma}``; its constant term in the
    expansion around the root is a Hurwitz-zeta value at a non-positive
    integer plus a correction from ``q^gamma`` hitting the pole of the
    odd-degree pieces.  Divergent pieces must cancel overall, otherwise
    :class:`NonConvergence` is raised.

    Returns
    -------
    dict
        ``{class index: RootSum}``.
    """
    hd = graph if isinstance(graph, HomologyData) else validate(graph, weak=weak)
    g = hd.graph
    deg = g.degrees
    L = g.size
    hubs = [i for i in range(L) if deg[i] >= 3]
    if len(hubs) > 1:
        raise MissingLimitValue("exact limits need at most one vertex of degree >= 3")
    classes = spinc_reps(hd)
    where = {c.key: c.index for c in classes}
    pre = prefactor_exponent(hd)
    sign = -1 if hd.b_plus % 2 else 1
    out = {c.index: RootSum() for c in classes}
    k = int(k)

    def add(idx, coeff, exponent):
        out[idx] = out[idx] + RootSum.root(Fraction(exponent) / k, coeff)

    if not hubs:
        supports = [_finite_support(d) for d in deg]
        for w in itertools.product(*supports):
            f = sign * math.prod(pv_coefficient(d, x) for d, x in zip(deg, w))
            if f:
                add(where[hd.key(w)], f, pre + linalg.quadratic_exponent(hd.Binv, w))
        return out

    h = hubs[0]
    rest = [i for i in range(L) if i != h]
    mh = deg[h] - 2
    binom = _binomial_poly(mh)
    M = [[-x for x in row] for row in hd.Binv]
    alpha = M[h][h]
    col = [hd.Binv[i][h] for i in range(L)]
    key_period = math.lcm(*[x.denominator for x in col])
    divergent = {}

    for u_rest in itertools.product(*[_finite_support(deg[i]) for i in rest]):
        fu = sign * math.prod(pv_coefficient(deg[i], x) for i, x in zip(rest, u_rest))
        if not fu:
            continue
        u = [0] * L
        for i, x in zip(rest, u_rest):
            u[i] = x
        Mu_h = sum(M[h][j] * u[j] for j in range(L))
        uMu = sum(u[i] * M[i][j] * u[j] for i in range(L) for j in range(L))
        for s in (1, -1):
            side = Fraction((-1) ** mh, 2) if s == 1 else Fraction(1, 2)
            x0 = Fraction(mh, 2) + s * Mu_h / (2 * alpha)
            gamma = pre + uMu / 4 - Mu_h * Mu_h / (4 * alpha)

            def exponent(j):
                return alpha * (j + x0) ** 2 + gamma

            def cls_of(j):
                w = list(u)
                w[h] = s * (mh + 2 * j)
                return where[hd.key(w)]

            beta = 2 * alpha * x0
            N = _phase_period(alpha, beta, k, key_period)
            J0 = max(0, math.floor(-x0) + 1)
            for j in range(J0):
                c = fu * side * sum(b * j ** d for d, b in enumerate(binom))
                add(cls_of(j), c, exponent(j))
            px = _poly_shift(binom, x0)
            for c in range(N):
                j = J0 + c
                idx = cls_of(j)
                a = (j + x0) / N
                ph = exponent(j) / k
                const = Fraction(0)
                for l, p in enumerate(px):
                    if not p:
                        continue
                    const += p * N ** l * hurwitz_zeta_negint(l, a)
                    if l % 2 == 1:
                        n2 = (l + 1) // 2
                        const += p * N ** l * (-gamma) ** n2 / (2 * n2 * (alpha * N * N) ** n2)
                    _track_divergence(divergent, idx, fu * side * p, l, N, alpha, gamma, ph)
                add(idx, fu * side * const, exponent(j))

    for (idx, power), v in divergent.items():
        if abs(v) > tol:
            raise NonConvergence(f"divergent term t^{power} does not cancel (class {idx})")
    return out


def _track_divergence(acc, idx, coeff, l, N, alpha, gamma, phase):
    """Record coefficients of negative powers of t from ``sum x^l e^{-t(alpha x^2 + gamma)}``."""
    with mpmath.workdps(40):
        half = Fraction(l + 1, 2)
        base = (mpmath.gamma(mpmath.mpf(l + 1) / 2) / 2 * mpmath.mpf(N) ** l
                * (mpmath.mpf(alpha.numerator) / alpha.denominator * N * N) ** (-(mpmath.mpf(l + 1) / 2)))
        rot = mpmath.expjpi(2 * mpmath.mpf(phase.numerator) / phase.denominator)
        i = 0
        while half - i > 0:
            power = -(half - i)
            if power == 0:
                break
            term = (mpmath.mpf(coeff.numerator) / coeff.denominator * base * rot
                    * (-mpmath.mpf(gamma.numerator) / gamma.denominator) ** i / mpmath.factorial(i))
            acc[(idx, power)] = acc.get((idx, power), 0) + term
            i += 1


def zhat_limit_values(graph, k: int, prec: int = 256) -> dict:
    """Exact limits converted to mpmath complex numbers."""
    return {i: v.to_complex(prec) for i, v in zhat_limits(graph, k).items()}
