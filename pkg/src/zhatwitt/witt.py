"""Mod 3 Witt invariants from tau_6.

``tau_6[Y, Theta]`` lies on the lattice ``i^a sqrt(3)^b``.  Reading off
``(a, b)`` for every ``Theta`` in ``H^1(Y; Z/2)`` gives the Witt invariant
``w(Y)``, the ranks ``d(Y_Theta)`` of the double covers and the defects
``def_3(Theta)``.  The four-dimensional definition of ``w(Y)`` from the
plumbing's intersection form is provided as an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Union

import mpmath
from mpmath import mp, mpc, mpf

from . import linalg, wrt
from .errors import (InconsistentChannel, MissingLimitValue, NumericError, PairingNotFound,
                     RecognitionFailed)
from .plumbing import HomologyData, PlumbingGraph, conjugation_orbits, spinc_reps, theta_reps, validate
from .qseries import DEFAULT_PRECISION_BITS, ComplexHP, RootSum

TOLERANCE = 1e-6

# 2(1^3) mod 4 for the nonzero class of -L(p,1), p even.
TWO_THETA_CUBED_LENS = {2: 2, 4: 0, 6: 2, 8: 0, 10: 2, 12: 0, 14: 2, 16: 0,
                        18: 0, 20: 0, 22: 2, 24: 2}


# ---------------------------------------------------------------------------
# Witt coefficients


def cwitt_odd_roots(p: int, t: int) -> RootSum:
    """Phase part of ``c^Witt_{0t}`` for odd ``p``; the full value is ``e^{-i pi/4}/(4 sqrt3)`` times it."""
    if p % 2 == 0:
        raise ValueError("p must be odd")
    return _accumulate(Fraction(-(2 * p * r - 2 * t + p) ** 2, 24 * p) for r in range(6))


def cwitt_even_roots(p: int, w: int, t: int) -> RootSum:
    """Phase part of ``c^Witt_{wt}`` for even ``p``; the prefactor is ``e^{-i pi/4}/(2 sqrt3)``."""
    if p % 2:
        raise ValueError("p must be even")
    if w not in (0, 1):
        raise ValueError("w must be 0 or 1")
    base = Fraction(-(2 * t + p * (w + 1)) ** 2, 24 * p)
    bracket = _accumulate([Fraction(0), Fraction(p * w + 2 * t, 6), Fraction(p * w + 2 * t - p, 3)])
    return bracket.rotate(base)


def _accumulate(phases) -> RootSum:
    terms = {}
    for ph in phases:
        ph = Fraction(ph) % 1
        terms[ph] = terms.get(ph, 0) + 1
    return RootSum(terms)


def _cwitt_scale(p: int, prec: int) -> mpc:
    with mp.workprec(prec):
        return mpmath.expjpi(mpf(-1) / 4) / ((4 if p % 2 else 2) * mpmath.sqrt(3))


def cwitt_odd(p: int, t: int, prec: int = DEFAULT_PRECISION_BITS) -> mpc:
    """``c^Witt_{0t} = e^{-i pi/4}/(4 sqrt3) sum_{r=0}^5 e^{-i pi (2pr - 2t + p)^2/(12p)}``."""
    with mp.workprec(prec):
        return _cwitt_scale(p, prec) * cwitt_odd_roots(p, t).to_complex(prec)


def cwitt_even(p: int, w: int, t: int, prec: int = DEFAULT_PRECISION_BITS) -> mpc:
    """``c^Witt_{wt}`` for even ``p``, ``w`` in {0, 1}."""
    with mp.workprec(prec):
        return _cwitt_scale(p, prec) * cwitt_even_roots(p, w, t).to_complex(prec)


def cwitt(p: int, w: int, t: int, prec: int = DEFAULT_PRECISION_BITS) -> mpc:
    return cwitt_odd(p, t, prec) if p % 2 else cwitt_even(p, w, t, prec)


# ---------------------------------------------------------------------------
# recognition


@dataclass(frozen=True)
class TauValue:
    """``raw ~ i^a sqrt(3)^b`` with ``residual = |raw - i^a sqrt(3)^b|``."""

    raw: ComplexHP
    a: int
    b: int
    residual: float

    @property
    def exact(self) -> complex:
        return complex(1j ** self.a * 3 ** (self.b / 2))

    def to_json(self) -> dict:
        return {"re": float(self.raw.re), "im": float(self.raw.im), "a": self.a, "b": self.b,
                "residual": float(self.residual)}


def recognize(z, tol: float = TOLERANCE) -> TauValue:
    """Nearest lattice point ``i^a sqrt(3)^b``; :class:`RecognitionFailed` beyond ``tol``.

    ``z`` may carry an error bound (:class:`ComplexHP`), which must be below
    ``tol / 10``.
    """
    hp = z if isinstance(z, ComplexHP) else ComplexHP(mpc(z), mpf(0))
    if hp.err >= tol / 10:
        raise NumericError(f"evaluation error {float(hp.err):.3g} too large for tolerance {tol:g}")
    v = hp.value
    if abs(v) < tol:
        raise RecognitionFailed("value is zero, not of the form i^a sqrt(3)^b")
    b = int(mpmath.nint(2 * mpmath.log(abs(v)) / mpmath.log(3)))
    a = int(mpmath.nint(mpmath.arg(v) / (mpmath.pi / 2))) % 4
    target = mpc(1j) ** a * mpmath.sqrt(3) ** b
    res = float(abs(v - target))
    if res > tol:
        raise RecognitionFailed(f"{mpmath.nstr(v, 12)} is {res:.3g} away from i^{a} sqrt3^{b}")
    return TauValue(hp, a, b, res)


# ---------------------------------------------------------------------------
# tau_6 channels


def theta_weight(theta: Sequence[int]) -> int:
    """Index ``w`` of the c^Witt row: 0 for the trivial class, 1 otherwise."""
    return 1 if any(theta) else 0


def find_pairing(graph, k: int = 6, tol: float = 1e-12) -> dict:
    """Match each conjugation orbit to a c^Witt column ``t``.

    An orbit's plumbed coefficient (averaged over the orbit) must equal
    ``c^Witt_{w(Theta), t}`` for every ``Theta``.  Returns ``{orbit: t}``
    with the smallest matching ``t``.  Needs cyclic ``H_1``.
    """
    hd = graph if isinstance(graph, HomologyData) else validate(graph)
    if not hd.is_cyclic:
        raise PairingNotFound("c^Witt pairing needs cyclic H_1")
    p = hd.det_abs
    thetas = theta_reps(hd)
    orbits = conjugation_orbits(spinc_reps(hd))
    coeffs = [wrt.plumbed_coefficients(hd, th, k) for th in thetas]
    pairing = {}
    for orb in orbits:
        want = [sum(c.get(i, 0) for i in orb) / len(orb) for c in coeffs]
        match = None
        for t in range(p):
            if all(abs(cwitt(p, theta_weight(th), t) - x) < tol for th, x in zip(thetas, want)):
                match = t
                break
        if match is None:
            raise PairingNotFound(f"orbit {orb} matches no c^Witt column")
        pairing[orb] = match
    return pairing


def folded_limits(hd: HomologyData, k: int = 6, limits=None) -> dict:
    """``{orbit: lim (Ẑ_b + Ẑ_-b)}``, a self-conjugate class counted once."""
    from .zhat import zhat_limits

    if limits is None:
        limits = zhat_limits(hd, k)
    out = {}
    for orb in conjugation_orbits(spinc_reps(hd)):
        tot = RootSum()
        for i in orb:
            tot = tot + limits[i]
        out[orb] = tot
    return out


def tau6_cwitt(p: int, theta_w: int, folded: Mapping, pairing: Mapping,
               prec: int = DEFAULT_PRECISION_BITS) -> ComplexHP:
    """``sum_orbits c^Witt_{w, t(orbit)} lim Ẑ^fold_orbit``.

    ``folded`` maps orbit keys to :class:`RootSum` or complex limits and
    ``pairing`` maps the same keys to columns ``t``.
    """
    exact, numeric = RootSum(), mpc(0)
    with mp.workprec(prec):
        for key, z in folded.items():
            t = pairing[key]
            rs = cwitt_odd_roots(p, t) if p % 2 else cwitt_even_roots(p, theta_w, t)
            if isinstance(z, RootSum):
                exact = exact + rs * z
            else:
                numeric += rs.to_complex(prec) * mpc(z)
        val = _cwitt_scale(p, prec) * (exact.to_complex(prec) + numeric)
        return ComplexHP(+val, abs(val) * mpf(2) ** (-prec + 16), prec)


@dataclass(frozen=True)
class Channel:
    theta: tuple
    value: ComplexHP
    method: str


def tau6_channels(graph, method: str = "auto", k: int = 6, limits=None, pairing=None,
                  prec: int = DEFAULT_PRECISION_BITS, tol: float = 1e-9) -> list:
    """``tau_k[Y, Theta]`` for every ``Theta``, Theta = 0 first.

    ``method`` is ``"plumbed"`` (Gauss double sum), ``"cwitt"`` (Witt
    coefficients, cyclic ``H_1`` only) or ``"auto"`` (both when possible;
    they must agree within ``tol``).
    """
    hd = graph if isinstance(graph, HomologyData) else validate(graph)
    if limits is None:
        from .zhat import zhat_limits
        limits = zhat_limits(hd, k)
    thetas = theta_reps(hd)
    out = []
    use_cwitt = method == "cwitt" or (method == "auto" and hd.is_cyclic and k == 6)
    use_plumbed = method in ("plumbed", "auto")
    if method not in ("plumbed", "cwitt", "auto"):
        raise ValueError(f"unknown method {method!r}")
    if use_cwitt:
        if k != 6:
            raise ValueError("c^Witt coefficients are defined at k = 6")
        pairing = pairing if pairing is not None else find_pairing(hd, k)
        fold = folded_limits(hd, k, limits)
    for th in thetas:
        vp = wrt.tau_from_zhat_plumbed(hd, th, k, limits, prec) if use_plumbed else None
        vc = tau6_cwitt(hd.det_abs, theta_weight(th), fold, pairing, prec) if use_cwitt else None
        if vp is not None and vc is not None:
            if abs(vp.value - vc.value) > tol:
                raise InconsistentChannel(f"plumbed and c^Witt values differ at Theta={th}")
            out.append(Channel(tuple(th), vp, "plumbed+cwitt"))
        elif vp is not None:
            out.append(Channel(tuple(th), vp, "plumbed"))
        else:
            out.append(Channel(tuple(th), vc, "cwitt"))
    return out


def tau6(graph, theta: Union[Sequence[int], None] = None, method: str = "auto",
         tol: float = TOLERANCE) -> TauValue:
    """Recognized ``tau_6[Y, Theta]`` (default ``Theta = 0``)."""
    chans = tau6_channels(graph, method)
    theta = tuple(theta) if theta is not None else chans[0].theta
    for ch in chans:
        if ch.theta == theta:
            return recognize(ch.value, tol)
    raise ValueError(f"{theta} does not satisfy B c = 0 mod 2")


def limits_from_forms(graph, forms: Sequence, k: int = 6) -> dict:
    """Per-class limits ``{index: RootSum}`` from closed forms.

    Each form is a dict with ``class_rep``, ``convention`` (``"raw"`` for a
    single class, ``"folded"`` for ``Ẑ_b + Ẑ_-b``) and the
    :class:`~zhatwitt.falsetheta.PsiCombination` fields.  Every orbit must
    be covered.
    """
    from .falsetheta import PsiCombination

    hd = graph if isinstance(graph, HomologyData) else validate(graph)
    classes = spinc_reps(hd)
    where = {c.key: c.index for c in classes}
    orbit_of = {i: orb for orb in conjugation_orbits(classes) for i in orb}
    out = {}
    for f in forms:
        key = hd.key(f["class_rep"])
        if key not in where:
            raise MissingLimitValue(f"class_rep {f['class_rep']} is not a Spin^c representative")
        orb = orbit_of[where[key]]
        lim = PsiCombination.from_json(f).limit(k)
        raw = lim if f.get("convention", "folded") == "raw" else lim.scale(Fraction(1, len(orb)))
        for i in orb:
            out[i] = raw
    missing = [c.index for c in classes if c.index not in out]
    if missing:
        raise MissingLimitValue(f"no closed form for classes {missing}")
    return out


def corpus_entry(name: str) -> dict:
    from .plumbing import corpus_manifest

    manifest = corpus_manifest()
    if name not in manifest:
        raise KeyError(f"{name!r} is not in the corpus manifest")
    return manifest[name]


def corpus_two_theta_cubed(name: str) -> dict:
    entry = corpus_entry(name)
    return {tuple(x["theta"]): (x["value"], x["source"]) for x in entry.get("two_theta_cubed", [])}


# ---------------------------------------------------------------------------
# extraction


@dataclass(frozen=True)
class ChannelReport:
    theta: tuple
    tau: TauValue
    epsilon: int
    d_cover: int
    def3: Union[int, None]
    two_theta_cubed: Union[int, None]
    two_theta_cubed_source: str

    def to_json(self) -> dict:
        return {"theta": list(self.theta), "tau": self.tau.to_json(), "epsilon": self.epsilon,
                "d_cover": self.d_cover, "def3": self.def3,
                "two_theta_cubed": {"value": self.two_theta_cubed,
                                    "source": self.two_theta_cubed_source}}


@dataclass(frozen=True)
class WittReport:
    manifold: str
    w: int
    d: int
    channels: tuple
    witt_4d: Union[int, None] = None
    extra: dict = field(default_factory=dict)

    @property
    def agrees_4d(self) -> Union[bool, None]:
        return None if self.witt_4d is None else self.witt_4d == self.w

    def channel(self, theta) -> ChannelReport:
        for c in self.channels:
            if c.theta == tuple(theta):
                return c
        raise KeyError(theta)

    def to_json(self) -> dict:
        out = {"manifold": self.manifold, "w": self.w, "d": self.d,
               "channels": [c.to_json() for c in self.channels]}
        if self.witt_4d is not None:
            out["witt_4d"] = self.witt_4d
            out["agree_4d"] = self.agrees_4d
        out.update(self.extra)
        return out


def extract_invariants(taus: Sequence, d_Y: int, two_theta_cubed: Mapping = None,
                       manifold: str = "", witt_4d: Union[int, None] = None) -> WittReport:
    """Invert ``tau_6[Y, Theta] = i^{-w + 2 Theta^3 + def3} sqrt3^{eps + d(Y_Theta) - d(Y)}``.

    ``taus`` is a sequence of ``(theta, TauValue)`` with the trivial class
    first.  ``two_theta_cubed`` maps ``theta`` to ``(value, source)``; missing
    nonzero classes get ``(0, "assumed")``.
    """
    two_theta_cubed = dict(two_theta_cubed or {})
    taus = [(tuple(th), tv) for th, tv in taus]
    th0, tv0 = taus[0]
    if any(th0):
        raise InconsistentChannel("first channel must be Theta = 0")
    if tv0.b != d_Y:
        raise InconsistentChannel(f"Theta=0 channel has sqrt3 exponent {tv0.b}, expected d(Y)={d_Y}")
    w = (-tv0.a) % 4
    chans = [ChannelReport(th0, tv0, 0, 2 * d_Y, 0, 0, "trivial")]
    for th, tv in taus[1:]:
        val, src = two_theta_cubed.get(th, (0, "assumed"))
        d_cover = tv.b - 1 + d_Y
        def3 = None if val is None else (tv.a + w - val) % 4
        chans.append(ChannelReport(th, tv, 1, d_cover, def3, val, src))
    return WittReport(manifold, w, d_Y, tuple(chans), witt_4d)


def witt_4d(B) -> int:
    """``sigma(X) - w(X) mod 4`` for the plumbed 4-manifold with intersection form ``B``."""
    bp, bm, _ = linalg.signature(B)
    return (bp - bm - linalg.diagonalize_mod3(B).trace) % 4


def lens_two_theta_cubed(p: int) -> dict:
    if p % 2 or p not in TWO_THETA_CUBED_LENS:
        return {}
    return {(1,): (TWO_THETA_CUBED_LENS[p], "table")}


def witt_report(graph: PlumbingGraph, two_theta_cubed: Mapping = None, method: str = "auto",
                tol: float = TOLERANCE, limits=None) -> WittReport:
    """Full pipeline: Ẑ limits, tau_6 per Theta, recognition and extraction.

    ``limits`` defaults to the exact plumbing limits.  ``two_theta_cubed``
    defaults to the lens table for single-vertex graphs and to the
    manifest entry for named corpus graphs.
    """
    hd = validate(graph)
    if two_theta_cubed is None:
        if graph.size == 1:
            two_theta_cubed = lens_two_theta_cubed(hd.det_abs)
        else:
            try:
                two_theta_cubed = corpus_two_theta_cubed(graph.name)
            except KeyError:
                two_theta_cubed = {}
    chans = tau6_channels(hd, method, limits=limits)
    taus = [(c.theta, recognize(c.value, tol)) for c in chans]
    return extract_invariants(taus, hd.d_Y, two_theta_cubed, graph.name, witt_4d(hd.B))


# ---------------------------------------------------------------------------
# sum rule


@dataclass(frozen=True)
class SumRuleReport:
    p: int
    deviations: tuple
    tol: float

    @property
    def max_deviation(self) -> float:
        return max(self.deviations)

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tol

    def to_json(self) -> dict:
        return {"p": self.p, "max_deviation": self.max_deviation, "passed": self.passed,
                "deviations": list(self.deviations)}


def sumrule_check(p: int, k: int = 6, lk=None, tol: float = 1e-9,
                  prec: int = DEFAULT_PRECISION_BITS) -> SumRuleReport:
    """Compare ``sum_Theta c^Witt_{Theta t}`` with ``CWRT_PREFACTOR * sum_a c^WRT_{at}(k)``.

    ``lk`` defaults to the lens-space form ``lk(1,1) = -1/p``.
    """
    lk = wrt.lens_lk(p) if lk is None else lk
    devs = []
    with mp.workprec(prec):
        for t in range(p):
            lhs = cwitt_odd(p, t, prec) if p % 2 else cwitt_even(p, 0, t, prec) + cwitt_even(p, 1, t, prec)
            rhs = wrt.CWRT_PREFACTOR * mpmath.fsum(wrt.cwrt_coeff(p, lk, a, t, k, prec) for a in range(p))
            devs.append(float(abs(lhs - rhs)))
    return SumRuleReport(p, tuple(devs), tol)
