"""Real root isolation, bisection refinement and simultaneous complex roots."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sympy.polys.domains import ZZ
from sympy.polys.factortools import dup_factor_list

from .numeric import BigComplex, context, to_ctx
from .poly import Poly, squarefree_decomposition, squarefree_part


@dataclass(frozen=True)
class RootBracket:
    """Interval ``[lo, hi]`` holding one distinct real root of ``poly``.

    ``poly`` is the squarefree part of the input.  ``lo == hi`` marks an
    exact rational root; otherwise the root is interior and ``poly``
    changes sign across the interval.
    """

    poly: Poly
    lo: Fraction
    hi: Fraction
    multiplicity: int

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi


def _int_coeffs(p: Poly) -> list[int]:
    prim = p.primitive()
    return [int(c) for c in prim.coeffs]


def _variations(c: list[int]) -> int:
    v = 0
    last = 0
    for x in c:
        if x:
            if last and (x > 0) != (last > 0):
                v += 1
            last = x
    return v


def _taylor_shift1(c: list[int]) -> list[int]:
    """Coefficients of ``p(x + 1)``."""
    a = list(c)
    n = len(a)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            a[j] += a[j + 1]
    return a


def _halve(c: list[int]) -> list[int]:
    """Coefficients of ``2**d * p(x / 2)``."""
    d = len(c) - 1
    return [x << (d - i) for i, x in enumerate(c)]


def _roots_in_unit(c: list[int]) -> int:
    """Descartes bound for roots of ``p`` in ``(0, 1)``."""
    return _variations(_taylor_shift1(list(reversed(c))))


def _isolate_unit(c: list[int], lo: Fraction, hi: Fraction, out: list) -> None:
    stack = [(c, lo, hi)]
    while stack:
        c, lo, hi = stack.pop()
        v = _roots_in_unit(c)
        if v == 0:
            continue
        if v == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        left = _halve(c)
        right = _taylor_shift1(left)
        if right[0] == 0:
            out.append((mid, mid))
            right = right[1:]
        stack.append((right, mid, hi))
        stack.append((left, lo, mid))


def _positive_roots(c: list[int], bound_pow: int) -> list[tuple[Fraction, Fraction]]:
    """Isolate roots in ``(0, 2**bound_pow)`` of the integer polynomial ``c``."""
    B = Fraction(2) ** bound_pow
    d = len(c) - 1
    if bound_pow >= 0:
        scaled = [x * (1 << (bound_pow * i)) for i, x in enumerate(c)]
    else:
        scaled = [x << (-bound_pow * (d - i)) for i, x in enumerate(c)]
    out: list = []
    _isolate_unit(scaled, Fraction(0), Fraction(1), out)
    return [(lo * B, hi * B) for lo, hi in out]


def _root_bound_pow(c: list[int]) -> int:
    """Exponent ``e`` with all roots of modulus below ``2**e`` (Cauchy bound)."""
    lead = abs(c[-1])
    m = max(abs(x) for x in c[:-1]) if len(c) > 1 else 0
    bound = 1 + Fraction(m, lead)
    e = 0
    while Fraction(2) ** e <= bound:
        e += 1
    return e


def isolate_real_roots(p: Poly) -> list[RootBracket]:
    """Disjoint brackets, one per distinct real root, sorted increasingly."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    if not (p.is_exact() and p.is_real()):
        raise TypeError("real root isolation needs rational coefficients")
    if p.degree < 1:
        return []
    sq = squarefree_part(p)
    factors = squarefree_decomposition(p)
    c = _int_coeffs(sq)
    brackets = []
    if c[0] == 0:
        brackets.append((Fraction(0), Fraction(0)))
        c = c[1:]
    if len(c) > 1:
        e = _root_bound_pow(c)
        pos = _positive_roots(c, e)
        neg_c = [x if i % 2 == 0 else -x for i, x in enumerate(c)]
        neg = [(-hi, -lo) for lo, hi in _positive_roots(neg_c, e)]
        brackets.extend(pos)
        brackets.extend(neg)
    brackets.sort()
    exact = rational_roots(sq)
    out = []
    full = _int_coeffs(sq)
    for lo, hi in brackets:
        # isolating intervals are open; an endpoint root belongs to another bracket
        hit = [r for r in exact if lo < r < hi or lo == r == hi]
        if hit:
            lo = hi = hit[0]
        else:
            lo, hi = _clear_endpoints(sq, full, lo, hi)
        mult = _multiplicity_in(factors, lo, hi)
        out.append(RootBracket(sq, lo, hi, mult))
    # neighbours may share a non-root endpoint; bisect until closed intervals are disjoint
    for i in range(len(out) - 1):
        while out[i].hi >= out[i + 1].lo:
            j = i if out[i].width >= out[i + 1].width else i + 1
            out[j] = bisect_step(out[j])
    return out


def rational_roots(p: Poly) -> list[Fraction]:
    """Distinct rational roots, from the linear factors over the integers."""
    if p.degree < 1:
        return []
    c = list(reversed(_int_coeffs(p)))
    _, factors = dup_factor_list([ZZ(x) for x in c], ZZ)
    out = []
    for f, _m in factors:
        if len(f) == 2:
            out.append(Fraction(-int(f[1]), int(f[0])))
    return sorted(out)


def _count_in(c: list[int], lo: Fraction, hi: Fraction) -> int:
    """Descartes count of roots in the open interval ``(lo, hi)``."""
    shifted = Poly([Fraction(x) for x in c]).compose(Poly([lo, hi - lo]))
    return _roots_in_unit(_int_coeffs(shifted))


def _clear_endpoints(sq: Poly, c: list[int], lo: Fraction, hi: Fraction):
    """Shrink an isolating interval until neither endpoint is a root."""
    while sq(lo) == 0 or sq(hi) == 0:
        mid = (lo + hi) / 2
        if sq(mid) == 0:
            return mid, mid
        if _count_in(c, lo, mid) == 1:
            hi = mid
        else:
            lo = mid
    return lo, hi


def _sign_at(p: Poly, x: Fraction) -> int:
    v = p(x)
    return (v > 0) - (v < 0)


def _multiplicity_in(factors, lo: Fraction, hi: Fraction) -> int:
    for f, m in factors:
        if lo == hi:
            if f(lo) == 0:
                return m
        elif _sign_at(f, lo) * _sign_at(f, hi) < 0:
            return m
    raise ArithmeticError("no squarefree factor owns the bracket")


def _eval_int(c: list[int], num: int, den: int) -> int:
    """``den**d * p(num/den)`` for integer coefficients."""
    acc = 0
    dp = 1
    for x in reversed(c):
        acc = acc * num + x * dp
        dp *= den
    return acc


def bisect_step(b: RootBracket) -> RootBracket:
    """Halve a bracket, keeping the half with the sign change."""
    if b.lo == b.hi:
        return b
    mid = (b.lo + b.hi) / 2
    s_lo = _sign_at(b.poly, b.lo)
    s_mid = _sign_at(b.poly, mid)
    if s_mid == 0:
        return RootBracket(b.poly, mid, mid, b.multiplicity)
    if s_lo * s_mid < 0:
        return RootBracket(b.poly, b.lo, mid, b.multiplicity)
    return RootBracket(b.poly, mid, b.hi, b.multiplicity)


def refine_root(b: RootBracket, prec: int) -> BigComplex:
    """Bisect until the bracket width is below ``2**(-prec+2)``."""
    if b.lo > b.hi:
        raise ValueError("invalid bracket: lo > hi")
    ctx = context(prec)
    if b.lo == b.hi:
        if b.poly(b.lo) != 0:
            raise ValueError("invalid bracket: degenerate interval is not a root")
        return BigComplex(ctx.mpc(to_ctx(ctx, b.lo)), prec)
    c = _int_coeffs(b.poly)
    lo, hi = b.lo, b.hi
    if not (_is_dyadic(lo) and _is_dyadic(hi)):
        return _refine_fraction(b, prec, ctx)
    k = max(lo.denominator.bit_length(), hi.denominator.bit_length()) - 1
    L = int(lo * (1 << k))
    H = int(hi * (1 << k))
    s_lo = _sgn(_eval_int(c, L, 1 << k))
    s_hi = _sgn(_eval_int(c, H, 1 << k))
    if s_lo == 0:
        return BigComplex(ctx.mpc(to_ctx(ctx, lo)), prec)
    if s_hi == 0:
        return BigComplex(ctx.mpc(to_ctx(ctx, hi)), prec)
    if s_lo * s_hi > 0:
        raise ValueError("invalid bracket: no sign change")
    target = prec - 2
    while True:
        width_bits = (H - L).bit_length() - k
        if width_bits <= -target:
            break
        L, H, k = 2 * L, 2 * H, k + 1
        M = (L + H) // 2
        s_mid = _sgn(_eval_int(c, M, 1 << k))
        if s_mid == 0:
            return BigComplex(ctx.mpc(ctx.ldexp(ctx.mpf(M), -k)), prec)
        if s_mid == s_lo:
            L = M
        else:
            H = M
    mid = ctx.ldexp(ctx.mpf(L + H), -(k + 1))
    return BigComplex(ctx.mpc(mid), prec)


def _is_dyadic(q: Fraction) -> bool:
    d = q.denominator
    return d & (d - 1) == 0


def _refine_fraction(b: RootBracket, prec: int, ctx) -> BigComplex:
    lo, hi = b.lo, b.hi
    s_lo = _sign_at(b.poly, lo)
    s_hi = _sign_at(b.poly, hi)
    if s_lo * s_hi > 0:
        raise ValueError("invalid bracket: no sign change")
    eps = Fraction(1, 1 << (prec - 2))
    while hi - lo > eps:
        mid = (lo + hi) / 2
        s = _sign_at(b.poly, mid)
        if s == 0:
            return BigComplex(ctx.mpc(to_ctx(ctx, mid)), prec)
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return BigComplex(ctx.mpc(to_ctx(ctx, (lo + hi) / 2)), prec)


def _sgn(x: int) -> int:
    return (x > 0) - (x < 0)


# complex roots


def _aberth(ctx, coeffs: list, max_iter: int = 2000) -> list:
    """Simultaneous Aberth iteration on a polynomial with simple roots."""
    d = len(coeffs) - 1
    if d == 1:
        return [-coeffs[0] / coeffs[1]]
    lead = coeffs[-1]
    a = [x / lead for x in coeffs]
    nz = [abs(x) for x in a[:-1] if x != 0]
    radius = max(ctx.mpf(2) ** -20, max(nz) ** (ctx.mpf(1) / d)) if nz else ctx.mpf(1)
    radius = max(abs(a[0]) ** (ctx.mpf(1) / d), radius / 2) if a[0] != 0 else radius / 2
    z = [radius * ctx.expj(2 * ctx.pi * k / d + ctx.mpf("0.4")) for k in range(d)]
    da = [i * a[i] for i in range(1, d + 1)]
    tol = ctx.mpf(2) ** (-ctx.prec + 8)
    for _ in range(max_iter):
        biggest = 0
        for k in range(d):
            zk = z[k]
            p = ctx.mpf(0)
            for x in reversed(a):
                p = p * zk + x
            dp = ctx.mpf(0)
            for x in reversed(da):
                dp = dp * zk + x
            if p == 0:
                continue
            ratio = p / dp if dp != 0 else ctx.mpf(0)
            s = ctx.fsum(1 / (zk - z[j]) for j in range(d) if j != k)
            denom = 1 - ratio * s
            w = ratio / denom if denom != 0 else ratio
            z[k] = zk - w
            rel = abs(w) / max(ctx.mpf(1), abs(z[k]))
            if rel > biggest:
                biggest = rel
        if biggest < tol:
            break
    return z


def _newton_polish(ctx, coeffs: list, z, steps: int = 3):
    dc = [i * coeffs[i] for i in range(1, len(coeffs))]
    for _ in range(steps):
        p = ctx.mpf(0)
        for x in reversed(coeffs):
            p = p * z + x
        dp = ctx.mpf(0)
        for x in reversed(dc):
            dp = dp * z + x
        if dp == 0 or p == 0:
            break
        z = z - p / dp
    return z


def complex_roots(p: Poly, prec: int) -> list[tuple[BigComplex, int]]:
    """All complex roots with multiplicities, sorted by (real, imag).

    Exact input is split into squarefree factors first so that the
    iteration only ever sees simple roots.  Numeric input is assumed
    squarefree.
    """
    if p.is_zero():
        raise ValueError("zero polynomial")
    if p.degree < 1:
        raise ValueError("degree must be at least one")
    work = context(prec + 64)
    if p.is_exact():
        parts = squarefree_decomposition(p)
    else:
        parts = [(p, 1)]
    out = []
    for f, m in parts:
        coeffs = [work.mpc(to_ctx(work, c)) for c in f.coeffs]
        zs = _aberth(work, coeffs)
        zs = [_newton_polish(work, coeffs, z) for z in zs]
        for z in zs:
            out.append((BigComplex(context(prec).mpc(z), prec), m))
    out.sort(key=lambda t: (float(t[0].re), float(t[0].im)))
    return out


def residual_scale(p: Poly, z) -> float:
    """``sum |a_i| |z|**i``, the natural scale for ``|p(z)|``."""
    r = abs(z)
    return sum(abs(complex(c)) * float(r) ** i for i, c in enumerate(p.coeffs))
