"""Linear conditions that encode prescribed critical data of ``f = P/Q``.

A triple ``(z, nu, b)`` asks that ``f - b`` vanish to order ``nu + 1`` at
``z``.  With ``P``, ``Q`` of degree at most ``n`` this is linear in their
coefficients: ``P^(l)(z) - b Q^(l)(z) = 0`` for ``l = 0..nu``, with the
usual variants when ``z`` or ``b`` is infinite (at ``z = INF`` the
conditions are imposed on ``t**n P(1/t)`` and ``t**n Q(1/t)`` at ``t = 0``).

Matrix columns are the coefficients ``P_0..P_n`` followed by ``Q_0..Q_n``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from . import linalg
from .numeric import context, to_ctx
from .poly import Poly, RationalMap
from .scalars import is_exact, scalar_to_json


class _Infinity:
    __slots__ = ()
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def is_inf(x) -> bool:
    return x is INF


@dataclass(frozen=True)
class CriticalTriple:
    """Point ``z`` mapped to ``b`` with local multiplicity ``nu + 1``."""

    z: object
    nu: int
    b: object

    def __post_init__(self):
        if self.nu < 0:
            raise ValueError("multiplicity must be non-negative")

    def to_json(self) -> dict:
        return {"z": point_to_json(self.z), "nu": self.nu, "b": point_to_json(self.b)}


def point_to_json(p):
    if p is INF:
        return "inf"
    if is_exact(p):
        return scalar_to_json(p)
    return {"re": str(p.real), "im": str(p.imag), "numeric": True}


@dataclass
class EvalMatrix:
    rows: list
    n: int
    data: list = field(default_factory=list)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), 2 * (self.n + 1)

    def to_json(self) -> dict:
        return {"n": self.n, "rows": [[scalar_to_json(x) if is_exact(x) else str(x) for x in r]
                                      for r in self.rows]}


def rh_degree(data: Sequence[CriticalTriple]) -> int:
    """Degree ``1 + sum(nu)/2`` forced by the Riemann-Hurwitz count."""
    total = sum(t.nu for t in data)
    if total % 2:
        raise ValueError("parity: total multiplicity must be even")
    return 1 + total // 2


def _falling(j: int, l: int) -> int:
    r = 1
    for t in range(l):
        r *= j - t
    return r


def condition_rows(z, nu: int, b, n: int) -> list[list]:
    """Rows for one triple; ``z`` and ``b`` may be exact, numeric or INF."""
    zero = Fraction(0)
    rows = []
    powers = None
    if z is not INF:
        powers = [Fraction(1) if is_exact(z) else z ** 0]
        for _ in range(n):
            powers.append(powers[-1] * z)
    for l in range(nu + 1):
        base = [zero] * (n + 1)
        if z is INF:
            if n - l >= 0:
                base[n - l] = Fraction(factorial(l))
        else:
            for j in range(l, n + 1):
                base[j] = _falling(j, l) * powers[j - l]
        if b is INF:
            rows.append([zero] * (n + 1) + [-x for x in base])
        else:
            rows.append(list(base) + [-b * x if x != 0 else zero for x in base])
    return rows


def check_distinct(points: Sequence) -> None:
    finite = [p for p in points if p is not INF]
    if len(points) - len(finite) > 1:
        raise ValueError("coincident critical points: more than one point at infinity")
    for i in range(len(finite)):
        for j in range(i):
            if finite[i] == finite[j]:
                raise ValueError(f"coincident critical points: {finite[i]}")


def assemble(data: Sequence[CriticalTriple], n: int) -> EvalMatrix:
    check_distinct([t.z for t in data])
    rows = []
    for t in data:
        rows.extend(condition_rows(t.z, t.nu, t.b, n))
    return EvalMatrix(rows=rows, n=n, data=list(data))


def split_vector(v: Sequence, n: int) -> tuple[Poly, Poly]:
    return Poly(v[: n + 1]), Poly(v[n + 1:])


def normalize_pair(P: Poly, Q: Poly) -> tuple[Poly, Poly]:
    """Scale so the first nonzero entry of the concatenation ``Q, P`` is 1."""
    lead = next((c for c in list(Q.coeffs) + list(P.coeffs) if c != 0), None)
    if lead is None:
        return P, Q
    inv = Fraction(1) / lead if is_exact(lead) else 1 / lead
    return P * inv, Q * inv


def nullspace(M: EvalMatrix, prec: int = 256) -> list[tuple[Poly, Poly]]:
    """Kernel basis of the evaluation matrix as ``(P, Q)`` pairs.

    Exact entries give an exact basis by fraction-free elimination.  Numeric
    entries use the singular values at ``prec`` bits; those below
    ``2**(-prec/2)`` times the largest count as zero.
    """
    ncols = 2 * (M.n + 1)
    if linalg.is_exact_matrix(M.rows):
        basis = linalg.nullspace(M.rows, ncols)
        return [normalize_pair(*split_vector(v, M.n)) for v in basis]
    ctx = context(prec)
    rows = [[to_ctx(ctx, x) for x in r] for r in M.rows]
    rows += [[ctx.mpf(0)] * ncols for _ in range(max(0, ncols - len(rows)))]
    A = ctx.matrix(rows)
    _, sv, V = ctx.svd_c(A)
    smax = max(abs(sv[i]) for i in range(len(sv))) if len(sv) else ctx.mpf(0)
    tol = ctx.mpf(2) ** (-(prec // 2)) * max(smax, ctx.mpf(1))
    out = []
    for i in range(ncols):
        if abs(sv[i]) <= tol:
            v = [ctx.conj(V[i, j]) for j in range(ncols)]
            out.append(normalize_pair(*split_vector(v, M.n)))
    return out


def numeric_nullspace(M: EvalMatrix, ctx) -> tuple[Poly, Poly, object]:
    """Single kernel vector of a numerically corank-one matrix.

    Returns ``(P, Q, residual)`` with the residual bound
    ``max|A v| / (max|A| * max|v|)``.
    """
    ncols = 2 * (M.n + 1)
    v, _ = linalg.numeric_kernel(ctx, M.rows, ncols)
    P, Q = normalize_pair(*split_vector(v, M.n))
    vec = list(P.coeffs) + [ctx.mpf(0)] * (M.n + 1 - len(P.coeffs)) + \
        list(Q.coeffs) + [ctx.mpf(0)] * (M.n + 1 - len(Q.coeffs))
    return P, Q, relative_residual(ctx, M.rows, vec)


def relative_residual(ctx, rows, vec):
    amax = max((abs(ctx.mpmathify(x)) for r in rows for x in r), default=ctx.mpf(1))
    vmax = max(abs(x) for x in vec)
    res = max((abs(ctx.fsum(ctx.mpmathify(a) * x for a, x in zip(r, vec))) for r in rows),
              default=ctx.mpf(0))
    return res / (amax * vmax)


@dataclass
class VerifyReport:
    ok: bool
    checks: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def _order_values(P: Poly, Q: Poly, z, b, d: int, upto: int) -> list:
    """``P^(l)(z) - b Q^(l)(z)`` (or reversed variants) for ``l <= upto``."""
    if z is INF:
        P, Q = P.reverse(d), Q.reverse(d)
        z = Fraction(0)
    pt = P.taylor(z, upto)
    qt = Q.taylor(z, upto)
    out = []
    for l in range(upto + 1):
        if b is INF:
            out.append(qt[l])
        else:
            out.append(pt[l] - b * qt[l])
    return out


def verify_critical_data(f: RationalMap, data: Sequence[CriticalTriple], tol=None) -> VerifyReport:
    """Check the prescribed multiplicities exactly (or to ``tol`` for numeric maps).

    The check covers vanishing up to order ``nu``, non-vanishing at order
    ``nu + 1``, coprimality of ``P`` and ``Q``, and the Riemann-Hurwitz
    count ``sum(nu) == 2 deg f - 2``, which rules out critical points
    outside the data.
    """
    checks = []
    exact = f.is_exact() and all(
        (t.z is INF or is_exact(t.z)) and (t.b is INF or is_exact(t.b)) for t in data)
    if not exact and tol is None:
        raise ValueError("numeric verification needs a tolerance")
    d = f.degree
    if exact:
        reduced = f.is_reduced()
        checks.append(("coprime", reduced))
    total = sum(t.nu for t in data)
    checks.append(("riemann_hurwitz", total == 2 * d - 2))
    for t in data:
        vals = _order_values(f.P, f.Q, t.z, t.b, d, t.nu + 1)
        if exact:
            vanish = all(v == 0 for v in vals[:-1])
            strict = vals[-1] != 0
        else:
            scale = _scale(f, t.z, t.b, t.nu + 1)
            vanish = all(abs(v) <= tol * scale for v in vals[:-1])
            strict = abs(vals[-1]) > tol * scale
        checks.append((f"vanish {t.z}", vanish))
        checks.append((f"strict {t.z}", strict))
    return VerifyReport(ok=all(ok for _, ok in checks), checks=checks)


def _scale(f: RationalMap, z, b, order: int):
    cmax = max([abs(c) for c in f.P.coeffs] + [abs(c) for c in f.Q.coeffs])
    if z is INF:
        r = 1
    else:
        r = max(1, abs(z))
    bb = 1 if b is INF else max(1, abs(b))
    return cmax * bb * (f.degree + 1) ** (order + 1) * r ** f.degree
