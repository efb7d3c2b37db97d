"""Numerical radial limits ``q = e^{2 pi i (u + i y)}``, ``y -> 0``."""

from __future__ import annotations

import cmath
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from mpmath import mpc, mpf

from .errors import InsufficientSeries, RecognitionFailed
from .qseries import ComplexHP, QSeries, evaluate_partial_sums

# y-window and truncation grids used for the hyperbolic example
DEFAULT_Y_GRID = tuple(round(0.0020 - 0.0002 * i, 4) for i in range(6))
ARG_TRUNCATIONS = (1800, 1860, 1980, 2040)
MODULUS_TRUNCATIONS = tuple(range(200, 531, 10))
# a scan counts as converged only if e^{-2 pi y N} at the last truncation is below this
TAIL_DAMPING = 1e-6


@dataclass(frozen=True)
class RadialEstimate:
    """Partial sums on an ``(N, y)`` grid and the resulting limit estimate.

    ``uncertainty`` is the larger of the spread over the finest ``window``
    y values and the spread over the last three truncations at the finest
    y.  ``converged`` requires the truncation spread to stay within three
    times the y spread (or within ``atol``), no truncation to exceed the
    series, and the terms past the last truncation to be damped below
    ``TAIL_DAMPING`` at the finest y.
    """

    u: Fraction
    y_grid: tuple
    truncations: tuple
    values: dict
    limit: complex
    uncertainty: float
    y_spread: float
    truncation_spread: float
    converged: bool
    clipped: tuple = ()
    notes: tuple = field(default_factory=tuple)

    @property
    def limit_modulus(self) -> float:
        return abs(self.limit)

    @property
    def limit_arg_normalized(self) -> float:
        """``Arg(limit) / 2 pi`` in ``(-1/2, 1/2]``."""
        return cmath.phase(self.limit) / (2 * math.pi)

    def to_json(self) -> dict:
        return {"u": str(self.u), "y_grid": list(self.y_grid),
                "truncations": [None if n is None else str(n) for n in self.truncations],
                "limit": {"re": self.limit.real, "im": self.limit.imag},
                "limit_modulus": self.limit_modulus,
                "limit_arg_normalized": self.limit_arg_normalized,
                "uncertainty": self.uncertainty, "converged": self.converged,
                "clipped": [str(n) for n in self.clipped], "notes": list(self.notes)}

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("N,y,re,im,modulus,arg_normalized\n")
        for (N, y), v in sorted(self.values.items(), key=lambda kv: (_num(kv[0][0]), -kv[0][1])):
            buf.write(f"{N},{y},{v.real!r},{v.imag!r},{abs(v)!r},{cmath.phase(v) / (2 * math.pi)!r}\n")
        return buf.getvalue()


def _num(N):
    return math.inf if N is None else N


def _spread(vals) -> float:
    vals = list(vals)
    return max((abs(a - b) for a in vals for b in vals), default=0.0)


def radial_scan(s: QSeries, u, y_grid: Sequence = DEFAULT_Y_GRID, truncations: Sequence = None,
                window: int = 3, backend: str = "numpy", allow_clip: bool = False,
                atol: float = 1e-12) -> RadialEstimate:
    """Radial limit of ``s`` toward ``e^{2 pi i u}``.

    ``truncations`` are exponent bounds relative to the prefactor (terms
    with ``exponent - prefactor <= N`` are kept); None means the whole
    series.  Truncations beyond the stored series raise
    :class:`InsufficientSeries` unless ``allow_clip``; clipped scans are
    never marked converged.
    """
    ys = [float(y) for y in y_grid]
    if not ys or any(y <= 0 for y in ys) or any(a <= b for a, b in zip(ys, ys[1:])):
        raise ValueError("y_grid must be positive and strictly decreasing")
    avail = s.truncation
    clipped = ()
    if truncations is None:
        rel = [None]
    else:
        rel = [Fraction(n) for n in truncations]
        over = tuple(n for n in rel if n >= avail)
        if over and not allow_clip:
            raise InsufficientSeries(f"series is exact below relative order {avail}, "
                                     f"truncation {max(over)} requested")
        clipped = over
    absolute = [None if n is None else s.prefactor + n for n in rel]
    raw = evaluate_partial_sums(s, u, ys, absolute, backend=backend)
    values = {(n, y): raw[(a, y)] for n, a in zip(rel, absolute) for y in ys}
    last = rel[-1]
    finest = ys[-1]
    limit = values[(last, finest)]
    y_spread = _spread(values[(last, y)] for y in ys[-window:])
    n_spread = _spread(values[(n, finest)] for n in rel[-3:])
    # the unknown tail beyond the stored series is damped by at most this factor
    reach = min(avail, max((n for n in rel if n is not None), default=avail))
    tail = math.exp(-2 * math.pi * finest * float(reach))
    converged = not clipped and n_spread <= max(3 * y_spread, atol) and tail < TAIL_DAMPING
    notes = []
    if clipped:
        notes.append(f"truncations {', '.join(map(str, clipped))} exceed the stored series "
                     f"(exact below relative order {avail})")
    if tail >= TAIL_DAMPING:
        notes.append(f"at y = {finest:g} the terms beyond relative order {reach} are damped only by "
                     f"{tail:.3g}; the series is too short for this y window")
    return RadialEstimate(Fraction(u), tuple(ys), tuple(rel), values, complex(limit),
                          max(y_spread, n_spread), y_spread, n_spread, converged, clipped, tuple(notes))


def psi_radial_limit(m: int, r: int, k: int, y_grid: Sequence = (1e-6, 5e-7, 2e-7, 1e-7),
                     tail: float = 50.0) -> RadialEstimate:
    """Radial limit of the partial theta series ``Psi_{m,r}`` toward ``e^{2 pi i/k}``.

    The series is generated far enough that ``e^{-2 pi y n}`` at the cutoff
    is below ``e^{-tail}`` for the finest ``y``.
    """
    from .falsetheta import psi_qseries

    q_max = math.ceil(tail / (2 * math.pi * min(y_grid)))
    return radial_scan(psi_qseries(m, r, q_max), Fraction(1, k), y_grid)


@dataclass(frozen=True)
class NumericTau:
    estimate: RadialEstimate
    value: complex
    uncertainty: float
    recognized: object  # TauValue or None
    note: str = ""

    def to_json(self) -> dict:
        out = {"tau": {"re": self.value.real, "im": self.value.imag}, "uncertainty": self.uncertainty,
               "converged": self.estimate.converged, "radial": self.estimate.to_json(), "note": self.note}
        out["recognized"] = None if self.recognized is None else self.recognized.to_json()
        return out


def tau6_numeric(s: QSeries, h1_order: int = 1, tol: float = 0.05, **scan) -> NumericTau:
    """``tau_6 = c^Witt_00 * lim Ẑ`` for an integral homology sphere, from a radial scan.

    Recognition uses the wide tolerance ``max(tol, uncertainty)``; failure is
    reported in the result rather than raised.
    """
    from .witt import cwitt_odd, recognize

    if h1_order != 1:
        raise ValueError("numeric tau_6 is implemented for integral homology spheres only")
    est = radial_scan(s, Fraction(1, 6), **scan)
    c = complex(cwitt_odd(1, 0))
    val = c * est.limit
    unc = abs(c) * est.uncertainty
    if unc >= abs(val):
        return NumericTau(est, val, unc, None,
                          f"uncertainty {unc:.3g} exceeds |tau_6| = {abs(val):.3g}; the scan does not resolve the value")
    try:
        rec = recognize(ComplexHP(mpc(val), mpf(0)), max(tol, unc))
        note = ""
    except RecognitionFailed as exc:
        rec, note = None, str(exc)
    return NumericTau(est, val, unc, rec, note)
