"""Exact and numeric linear algebra used by the critical evaluation map."""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

from .scalars import GaussRat, gauss, is_exact


class GaussInt:
    """Gaussian integer with exact division, used only inside elimination."""

    __slots__ = ("a", "b")

    def __init__(self, a: int, b: int = 0):
        self.a = a
        self.b = b

    def __add__(self, o):
        return GaussInt(self.a + o.a, self.b + o.b)

    def __sub__(self, o):
        return GaussInt(self.a - o.a, self.b - o.b)

    def __mul__(self, o):
        return GaussInt(self.a * o.a - self.b * o.b, self.a * o.b + self.b * o.a)

    def __floordiv__(self, o):
        n = o.a * o.a + o.b * o.b
        ra = self.a * o.a + self.b * o.b
        rb = self.b * o.a - self.a * o.b
        qa, xa = divmod(ra, n)
        qb, xb = divmod(rb, n)
        if xa or xb:
            raise ArithmeticError("inexact Gaussian division")
        return GaussInt(qa, qb)

    def __bool__(self):
        return bool(self.a or self.b)

    def to_exact(self):
        return gauss(self.a, self.b)


def _row_to_ring(row: Sequence, gaussian: bool):
    den = 1
    for x in row:
        if isinstance(x, GaussRat):
            den = lcm(den, x.re.denominator, x.im.denominator)
        else:
            den = lcm(den, Fraction(x).denominator)
    if not gaussian:
        return [int(Fraction(x) * den) for x in row]
    out = []
    for x in row:
        if isinstance(x, GaussRat):
            out.append(GaussInt(int(x.re * den), int(x.im * den)))
        else:
            out.append(GaussInt(int(Fraction(x) * den), 0))
    return out


def fraction_free_echelon(rows: Sequence[Sequence], ncols: int):
    """Row echelon form by fraction-free elimination.

    Returns ``(E, pivots, gaussian)`` where ``E`` holds ring elements (ints or
    :class:`GaussInt`) and ``pivots`` lists the pivot columns.
    """
    gaussian = any(isinstance(x, GaussRat) for r in rows for x in r)
    A = [_row_to_ring(r, gaussian) for r in rows]
    if gaussian:
        one = GaussInt(1)
    else:
        one = 1
    m = len(A)
    pivots: list[int] = []
    r = 0
    prev = one
    for c in range(ncols):
        if r >= m:
            break
        p = next((i for i in range(r, m) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        for i in range(r + 1, m):
            aic = A[i][c]
            Ai = A[i]
            Ar = A[r]
            if aic:
                A[i] = [(piv * Ai[j] - aic * Ar[j]) // prev for j in range(ncols)]
            else:
                A[i] = [(piv * Ai[j]) // prev for j in range(ncols)]
        prev = piv
        pivots.append(c)
        r += 1
    return A[:r], pivots, gaussian


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list]:
    """Exact kernel basis of the matrix given by ``rows``.

    Each basis vector has a free coordinate equal to 1 and zeros at the
    other free coordinates.
    """
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    E, pivots, gaussian = fraction_free_echelon(rows, ncols)
    conv = (lambda x: x.to_exact()) if gaussian else Fraction
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i in range(len(pivots) - 1, -1, -1):
            pc = pivots[i]
            row = E[i]
            s = Fraction(0)
            for j in range(pc + 1, ncols):
                if row[j] and v[j] != 0:
                    s = s + conv(row[j]) * v[j]
            v[pc] = -s / conv(row[pc])
        basis.append(v)
    return basis


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    if not rows:
        return 0
    return len(fraction_free_echelon(rows, ncols)[1])


def integerize(v: Sequence[Fraction]) -> list[int]:
    """Scale a rational vector to coprime integers."""
    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    return [int(Fraction(x) * den) for x in v]


def bareiss_det(M: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by Bareiss elimination."""
    A = [list(r) for r in M]
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            p = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if p is None:
                return 0
            A[k], A[p] = A[p], A[k]
            sign = -sign
        akk = A[k][k]
        Ak = A[k]
        for i in range(k + 1, n):
            Ai = A[i]
            aik = Ai[k]
            for j in range(k + 1, n):
                Ai[j] = (Ai[j] * akk - aik * Ak[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def left_kernel_minors(M: Sequence[Sequence[int]]) -> list[int]:
    """Signed maximal minors of an ``(r+1) x r`` integer matrix.

    Entry ``i`` is ``(-1)**i * det(M without row i)``; the vector spans the
    left kernel of ``M`` when ``M`` has full column rank.
    """
    r = len(M[0]) if M else 0
    if len(M) != r + 1:
        raise ValueError("expected one more row than columns")
    return [(-1) ** i * bareiss_det([row for j, row in enumerate(M) if j != i])
            for i in range(r + 1)]


def signed_minors(M: Sequence[Sequence[int]]) -> list[int]:
    """All ``(-1)**i * det(M without row i)`` from two eliminations.

    Computes ``d0 = det(M without row 0)`` and then solves for the left
    kernel vector ``y`` with ``y[0] = 1``; the minors are ``d0 * y``.
    """
    r = len(M[0]) if M else 0
    if len(M) != r + 1:
        raise ValueError("expected one more row than columns")
    d0 = bareiss_det(M[1:])
    if d0 == 0:
        return left_kernel_minors(M)
    # y^T M = 0 with y0 = 1  <=>  B^T y' = -m0 with B = M[1:]
    B = M[1:]
    rhs = [-x for x in M[0]]
    aug = [[B[i][j] for i in range(r)] + [rhs[j]] for j in range(r)]
    sol = _solve_integer_system(aug, r)
    out = [d0]
    for x in sol:
        val = x * d0
        if val.denominator != 1:
            raise ArithmeticError("minor is not an integer")
        out.append(int(val))
    return out


def _solve_integer_system(aug: list[list[int]], n: int) -> list[Fraction]:
    """Solve a nonsingular integer system given as an augmented matrix."""
    A = [list(r) for r in aug]
    prev = 1
    for k in range(n):
        if A[k][k] == 0:
            p = next(i for i in range(k + 1, n) if A[i][k] != 0)
            A[k], A[p] = A[p], A[k]
        akk = A[k][k]
        Ak = A[k]
        for i in range(k + 1, n):
            Ai = A[i]
            aik = Ai[k]
            for j in range(k + 1, n + 1):
                Ai[j] = (Ai[j] * akk - aik * Ak[j]) // prev
            Ai[k] = 0
        prev = akk
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(A[i][n])
        for j in range(i + 1, n):
            if A[i][j]:
                s -= A[i][j] * x[j]
        x[i] = s / A[i][i]
    return x


def numeric_kernel(ctx, rows: Sequence[Sequence], ncols: int):
    """Kernel vector of a numerically corank-one matrix.

    Gaussian elimination with complete pivoting; the last pivot column is
    the free one.  Returns ``(vector, last_pivot_ratio)`` where the ratio
    is the smallest eliminated pivot over the largest, a cheap corank
    diagnostic.
    """
    A = [[ctx.mpmathify(x) for x in r] for r in rows]
    m = len(A)
    cols = list(range(ncols))
    first = None
    last = None
    steps = min(m, ncols - 1)
    for step in range(steps):
        best = None
        bv = -1
        for i in range(step, m):
            Ai = A[i]
            for j in range(step, ncols):
                v = abs(Ai[cols[j]])
                if v > bv:
                    bv = v
                    best = (i, j)
        i, j = best
        A[step], A[i] = A[i], A[step]
        cols[step], cols[j] = cols[j], cols[step]
        p = A[step][cols[step]]
        if first is None:
            first = abs(p)
        last = abs(p)
        if p == 0:
            raise ArithmeticError("matrix has numerical corank above one")
        for i in range(step + 1, m):
            f = A[i][cols[step]] / p
            if f:
                Ai = A[i]
                As = A[step]
                A[i] = [a - f * b for a, b in zip(Ai, As)]
    x = [ctx.mpf(0)] * ncols
    x[cols[ncols - 1]] = ctx.mpf(1)
    for step in range(steps - 1, -1, -1):
        s = ctx.mpf(0)
        row = A[step]
        for j in range(step + 1, ncols):
            s += row[cols[j]] * x[cols[j]]
        x[cols[step]] = -s / row[cols[step]]
    if first is None:
        return x, ctx.mpf(1)
    ratio = (last / first) if first else ctx.mpf(0)
    return x, ratio


def is_exact_matrix(rows: Sequence[Sequence]) -> bool:
    return all(is_exact(x) for r in rows for x in r)
