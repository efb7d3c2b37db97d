"""Exact integer and rational matrix algebra.

Everything here works on Python ints and :class:`fractions.Fraction`, so
results never depend on floating point.  Matrices are tuples of row tuples.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import NotNegativeDefinite, SingularLinkingMatrix, ValidationError

IntMatrix = tuple  # tuple[tuple[int, ...], ...]


def as_int_matrix(M) -> IntMatrix:
    """Coerce a nested sequence (or numpy array) to an immutable int matrix."""
    rows = tuple(tuple(int(x) for x in row) for row in M)
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValidationError("ragged matrix")
    return rows


def _require_square(M):
    if any(len(r) != len(M) for r in M):
        raise ValidationError("matrix must be square")


def _require_symmetric(M):
    _require_square(M)
    n = len(M)
    for i in range(n):
        for j in range(i + 1, n):
            if M[i][j] != M[j][i]:
                raise ValidationError("matrix must be symmetric")


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(A, B):
    Bt = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def matvec(A, v):
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def transpose(A):
    return tuple(zip(*A))


def determinant(M) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    A = [list(r) for r in as_int_matrix(M)]
    _require_square(A)
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[-1][-1]


def rational_inverse(M) -> tuple:
    """Exact inverse over Q (Gauss-Jordan on Fractions)."""
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            raise SingularLinkingMatrix("matrix is singular")
        A[c], A[p] = A[p], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return tuple(tuple(row[n:]) for row in A)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SNFDecomposition:
    """``U @ M @ V == S`` with ``U``, ``V`` unimodular and ``S`` diagonal."""

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    invariant_factors: tuple

    @property
    def diagonal(self) -> tuple:
        return tuple(self.S[i][i] for i in range(min(len(self.S), len(self.S[0]) if self.S else 0)))


def smith_normal_form(M) -> SNFDecomposition:
    """Smith normal form of an integer matrix.

    Parameters
    ----------
    M : sequence of sequences of int

    Returns
    -------
    SNFDecomposition
        Diagonal entries are non-negative and each divides the next.
        ``invariant_factors`` lists the nonzero ones, including 1's.
    """
    A = [list(r) for r in as_int_matrix(M)]
    n = len(A)
    m = len(A[0]) if n else 0
    U = [list(r) for r in identity(n)]
    V = [list(r) for r in identity(m)]

    def row_op(i, j, f):  # row_i += f * row_j
        A[i] = [a + f * b for a, b in zip(A[i], A[j])]
        U[i] = [a + f * b for a, b in zip(U[i], U[j])]

    def col_op(i, j, f):  # col_i += f * col_j
        for row in A:
            row[i] += f * row[j]
        for row in V:
            row[i] += f * row[j]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    for t in range(min(n, m)):
        while True:
            best = None
            for i in range(t, n):
                for j in range(t, m):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            piv = A[t][t]
            clean = True
            for i in range(t + 1, n):
                if A[i][t]:
                    row_op(i, t, -(A[i][t] // piv))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, m):
                if A[t][j]:
                    col_op(j, t, -(A[t][j] // piv))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, m)
                        if A[i][j] % piv), None)
            if bad is None:
                break
            row_op(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]

    S = as_int_matrix(A)
    factors = tuple(S[i][i] for i in range(min(n, m)) if S[i][i] != 0)
    return SNFDecomposition(as_int_matrix(U), S, as_int_matrix(V), factors)


def is_unimodular(U) -> bool:
    return abs(determinant(U)) == 1


def integer_inverse(U) -> IntMatrix:
    """Inverse of a unimodular integer matrix."""
    inv = rational_inverse(U)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValidationError("matrix is not unimodular")
    return tuple(tuple(int(x) for x in row) for row in inv)


# ---------------------------------------------------------------------------
# congruence diagonalization (over Q and over F_3)


def _congruence_diagonalize(M, zero: Callable, div: Callable):
    """Symmetric elimination ``P^T M P = D``.

    ``zero(x)`` tests for zero in the coefficient field and ``div`` divides.
    Values are kept as Python objects; reduction mod 3 is done by the caller
    through ``div``/``zero``.
    """
    n = len(M)
    A = [list(r) for r in M]
    P = [[int(i == j) for j in range(n)] for i in range(n)]

    def add(i, j, f):  # col_i += f col_j and row_i += f row_j
        for r in range(n):
            A[r][i] += f * A[r][j]
        A[i] = [a + f * b for a, b in zip(A[i], A[j])]
        for r in range(n):
            P[r][i] += f * P[r][j]

    def swap(i, j):
        for r in range(n):
            A[r][i], A[r][j] = A[r][j], A[r][i]
        A[i], A[j] = A[j], A[i]
        for r in range(n):
            P[r][i], P[r][j] = P[r][j], P[r][i]

    for p in range(n):
        i = next((i for i in range(p, n) if not zero(A[i][i])), None)
        if i is None:
            pair = next(((i, j) for i in range(p, n) for j in range(p, n)
                         if i != j and not zero(A[i][j])), None)
            if pair is None:
                break
            add(pair[0], pair[1], 1)
            i = pair[0]
        swap(p, i)
        for r in range(p + 1, n):
            if not zero(A[r][p]):
                add(r, p, -div(A[r][p], A[p][p]))
    return [A[i][i] for i in range(n)], P, A


def signature(M) -> tuple:
    """Exact inertia ``(n_plus, n_minus, n_zero)`` of a symmetric matrix."""
    M = as_int_matrix(M)
    _require_symmetric(M)
    diag, _, _ = _congruence_diagonalize(
        [[Fraction(x) for x in r] for r in M], lambda x: x == 0, lambda a, b: a / b)
    return (sum(d > 0 for d in diag), sum(d < 0 for d in diag), sum(d == 0 for d in diag))


@dataclass(frozen=True)
class Mod3Diagonal:
    entries: tuple
    trace: int
    P: IntMatrix  # P^T M P is congruent to diag(entries) mod 3

    def verify(self, M) -> bool:
        D = matmul(matmul(transpose(self.P), as_int_matrix(M)), self.P)
        n = len(D)
        return all((D[i][j] - (self.entries[i] if i == j else 0)) % 3 == 0
                   for i in range(n) for j in range(n))


def diagonalize_mod3(M) -> Mod3Diagonal:
    """Diagonalize a symmetric form over F_3 with entries in {-1, 0, 1}."""
    M = as_int_matrix(M)
    _require_symmetric(M)
    inv3 = {1: 1, 2: 2}

    def zero(x):
        return x % 3 == 0

    def div(a, b):
        return (a * inv3[b % 3]) % 3

    diag, P, _ = _congruence_diagonalize([list(r) for r in M], zero, div)
    entries = tuple({0: 0, 1: 1, 2: -1}[d % 3] for d in diag)
    P = tuple(tuple(x % 3 for x in row) for row in P)
    return Mod3Diagonal(entries, sum(entries), P)


def kernel_mod2(M) -> list:
    """All vectors c over F_2 with ``M c = 0 (mod 2)``, sorted."""
    M = as_int_matrix(M)
    n = len(M[0]) if M else 0
    rows = [[x % 2 for x in r] for r in M]
    pivots, r = [], 0
    for c in range(n):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                rows[i] = [(a + b) % 2 for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = rows[i][f] % 2
        basis.append(v)
    out = set()
    for coeffs in itertools.product((0, 1), repeat=len(basis)):
        v = [0] * n
        for a, b in zip(coeffs, basis):
            if a:
                v = [(x + y) % 2 for x, y in zip(v, b)]
        out.add(tuple(v))
    return sorted(out)


# ---------------------------------------------------------------------------
# cosets of B Z^L


@dataclass(frozen=True)
class CosetSystem:
    """Coordinates on ``Z^L / M Z^L`` coming from ``U M V = S``."""

    U: IntMatrix
    Uinv: IntMatrix
    moduli: tuple

    def coords(self, v) -> tuple:
        return tuple(x % s for x, s in zip(matvec(self.U, v), self.moduli))

    def reps(self) -> list:
        return [matvec(self.Uinv, x) for x in itertools.product(*(range(s) for s in self.moduli))]


def coset_system(B, scale: int = 1) -> CosetSystem:
    B = as_int_matrix(B)
    _require_square(B)
    M = tuple(tuple(scale * x for x in r) for r in B)
    snf = smith_normal_form(M)
    moduli = tuple(snf.S[i][i] for i in range(len(M)))
    if any(s == 0 for s in moduli):
        raise SingularLinkingMatrix("det B = 0")
    return CosetSystem(snf.U, integer_inverse(snf.U), moduli)


def coset_reps(B, scale: int = 1) -> list:
    """Representatives of ``Z^L / (scale B) Z^L``.

    Ordered lexicographically in SNF coordinates, so the output is
    reproducible.  Exactly ``|det(scale * B)|`` vectors are returned.
    """
    if scale not in (1, 2):
        raise ValidationError("scale must be 1 or 2")
    return coset_system(B, scale).reps()


# ---------------------------------------------------------------------------
# lattice enumeration


def ldl(G) -> tuple:
    """Rational ``G = L D L^T`` for a positive definite matrix.

    Returns ``(L, D)`` with ``L`` unit lower triangular, or raises
    :class:`NotNegativeDefinite` if a pivot is not positive.
    """
    n = len(G)
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    D = [Fraction(0)] * n
    for j in range(n):
        D[j] = Fraction(G[j][j]) - sum(L[j][k] ** 2 * D[k] for k in range(j))
        if D[j] <= 0:
            raise NotNegativeDefinite("form is not definite")
        for i in range(j + 1, n):
            L[i][j] = (Fraction(G[i][j]) - sum(L[i][k] * L[j][k] * D[k] for k in range(j))) / D[j]
    return L, D


def _int_window(s: Fraction, rr: Fraction) -> range:
    """Integers v with (v - s)^2 <= rr."""
    if rr < 0:
        return range(0)
    r = math.sqrt(float(rr))
    lo = math.floor(float(s) - r) - 1
    hi = math.ceil(float(s) + r) + 1
    while lo <= hi and (lo - s) ** 2 > rr:
        lo += 1
    while hi >= lo and (hi - s) ** 2 > rr:
        hi -= 1
    return range(lo, hi + 1)


def fincke_pohst(G, center: Sequence, bound) -> list:
    """All integer v with ``(v - center)^T G (v - center) <= bound``.

    ``G`` is a positive definite rational matrix and ``center`` a
    rational vector.  Returns a sorted list of tuples.
    """
    n = len(G)
    bound = Fraction(bound)
    if bound < 0:
        return []
    if n == 0:
        return [()]
    L, D = ldl(G)
    c = [Fraction(x) for x in center]
    out = []
    v = [0] * n

    def rec(j, remaining):
        t = sum(L[i][j] * (v[i] - c[i]) for i in range(j + 1, n))
        s = c[j] - t
        for vj in _int_window(s, remaining / D[j]):
            v[j] = vj
            rest = remaining - D[j] * (vj - s) ** 2
            if j == 0:
                out.append(tuple(v))
            else:
                rec(j - 1, rest)

    rec(n - 1, bound)
    out.sort()
    return out


def enumerate_lattice_shell(B, residue: Sequence, bound) -> list:
    """Points ``w = residue (mod 2 B Z^L)`` with ``-(w, B^{-1} w)/4 <= bound``.

    Writing ``w = residue + 2 B y`` turns the exponent into
    ``(y + c)^T (-B) (y + c)`` with ``c = B^{-1} residue / 2``; the integer
    points ``y`` are found by Fincke-Pohst.  Output is sorted by
    (exponent, w).
    """
    B = as_int_matrix(B)
    _require_symmetric(B)
    G = tuple(tuple(-x for x in r) for r in B)
    try:
        ldl(G)
    except NotNegativeDefinite:
        raise NotNegativeDefinite("lattice enumeration needs a negative definite B") from None
    Binv = rational_inverse(B)
    r = [int(x) for x in residue]
    c = [sum(Binv[i][j] * r[j] for j in range(len(r))) / 2 for i in range(len(r))]
    ys = fincke_pohst(G, [-x for x in c], bound)
    pts = []
    for y in ys:
        w = tuple(r[i] + 2 * sum(B[i][j] * y[j] for j in range(len(r))) for i in range(len(r)))
        pts.append((quadratic_exponent(Binv, w), w))
    pts.sort()
    return [w for _, w in pts]


def quadratic_exponent(Binv, w) -> Fraction:
    """``-(w, B^{-1} w) / 4``."""
    n = len(w)
    return -sum(w[i] * Binv[i][j] * w[j] for i in range(n) for j in range(n)) / 4
