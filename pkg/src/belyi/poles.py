"""Schwarzian derivative of a rational map and its cubic normal form.

Near a zero ``z*`` of ``S''`` the Schwarzian ``S = {f, z}`` is matched,
after ``z -> z* + lam u``, against ``-2 (4u^3 - 2a u - 28b)``.  Running
this over the tritronquee maps ``f_k^{n,m}`` gives the estimates ``a_k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Optional, Sequence

from .critical_map import INF
from .families import FamilyIndex, critical_data
from .hurwitz import HurwitzData, resultant_polynomial, solve, solve_one
from .numeric import DEFAULT_PREC, BigComplex, context, digits_for, to_ctx
from .poly import Poly, RationalMap, gcd, squarefree_part
from .roots import complex_roots
from .scalars import is_exact

PRE_ASYMPTOTIC_BELOW = 3


@dataclass
class SchwarzianRational:
    """``S = num / den`` with ``den = pole_base**2`` up to a constant factor."""

    num: Poly
    den: Poly
    pole_base: Poly

    def __call__(self, z):
        return self.num(z) / self.den(z)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def series(self, z, order: int) -> list:
        """Taylor coefficients of ``S`` at ``z`` up to ``order``."""
        a = self.num.taylor(z, order)
        b = self.den.taylor(z, order)
        if b[0] == 0:
            raise ZeroDivisionError("expansion point is a pole")
        out = []
        for i in range(order + 1):
            acc = a[i]
            for j in range(1, i + 1):
                acc = acc - b[j] * out[i - j]
            out.append(acc / b[0])
        return out

    def derivatives(self, z, order: int) -> list:
        return [c * factorial(i) for i, c in enumerate(self.series(z, order))]

    def second_derivative_numerator(self) -> Poly:
        """Numerator of ``S''`` over ``pole_base**4`` (constant factor dropped)."""
        A, b = self.num, self.pole_base
        A = A * (1 / (self.den.lc / (b.lc * b.lc)))
        A1, A2 = A.derivative(), A.derivative(2)
        b1, b2 = b.derivative(), b.derivative(2)
        return A2 * b * b - A1 * b1 * b * 4 - A * b2 * b * 2 + A * b1 * b1 * 6

    def to_json(self) -> dict:
        return {"num": self.num.to_json() if self.num.is_exact() else [str(c) for c in self.num.coeffs],
                "den": self.den.to_json() if self.den.is_exact() else [str(c) for c in self.den.coeffs]}


def _wronskian_parts(f: RationalMap):
    P, Q = f.P, f.Q
    P1, P2, P3 = P.derivative(), P.derivative(2), P.derivative(3)
    Q1, Q2, Q3 = Q.derivative(), Q.derivative(2), Q.derivative(3)
    W = P1 * Q - P * Q1
    W1 = P2 * Q - P * Q2
    W2 = P3 * Q + P2 * Q1 - P1 * Q2 - P * Q3
    return W, W1, W2, P1, P2, Q1, Q2


def schwarzian(f: RationalMap, critical_points: Optional[Sequence] = None, prec: int = DEFAULT_PREC
               ) -> SchwarzianRational:
    """``f'''/f' - (3/2)(f''/f')^2`` as a reduced rational function.

    Exact maps are handled in exact arithmetic.  Numeric maps need the
    finite critical points; the numerator is then recovered by sampling
    ``S * b**2`` on a circle, ``b`` being the product of ``z - z_i``.
    """
    if f.degree < 1:
        raise ValueError("constant map has no Schwarzian")
    if f.is_exact():
        W, W1, W2, P1, P2, Q1, Q2 = _wronskian_parts(f)
        num = W * W2 * 2 - W1 * W1 * 3 + W * (P2 * Q1 - P1 * Q2) * 4
        den = W * W * 2
        if num.is_zero():
            return SchwarzianRational(Poly([]), Poly([1]), Poly([1]))
        g = gcd(num, den)
        num, den = num // g, den // g
        lc = den.lc
        num, den = num * (1 / lc), den * (1 / lc)
        return SchwarzianRational(num, den, squarefree_part(den).monic())
    if critical_points is None:
        raise ValueError("numeric maps need their finite critical points")
    return _numeric_schwarzian(f, critical_points, prec)


def schwarzian_at(f: RationalMap, z):
    P, Q = f.P, f.Q
    p = P.taylor(z, 3)
    q = Q.taylor(z, 3)
    p = [p[0], p[1], 2 * p[2], 6 * p[3]]
    q = [q[0], q[1], 2 * q[2], 6 * q[3]]
    W = p[1] * q[0] - p[0] * q[1]
    W1 = p[2] * q[0] - p[0] * q[2]
    W2 = p[3] * q[0] + p[2] * q[1] - p[1] * q[2] - p[0] * q[3]
    return (2 * W * W2 - 3 * W1 * W1 + 4 * W * (p[2] * q[1] - p[1] * q[2])) / (2 * W * W)


def _pick_radius(points, ctx):
    mods = [abs(to_ctx(ctx, p)) for p in points]
    best, bestd = None, -1
    for r in ("1", "0.75", "1.25", "0.6", "1.5", "0.45", "2"):
        rr = ctx.mpf(r)
        d = min((abs(rr - m) for m in mods), default=ctx.mpf(1))
        if d > bestd:
            best, bestd = rr, d
    return best


def _numeric_schwarzian(f: RationalMap, points: Sequence, prec: int) -> SchwarzianRational:
    ctx = context(prec + 32)
    b = Poly([ctx.mpf(1)])
    for z in points:
        b = b * Poly([-to_ctx(ctx, z), ctx.mpf(1)])
    B = b * b
    degA = max(0, B.degree - 2)
    M = degA + 1
    rho = _pick_radius(points, ctx)
    shift = ctx.pi / M
    g = RationalMap(f.P.map_coeffs(lambda c: to_ctx(ctx, c)), f.Q.map_coeffs(lambda c: to_ctx(ctx, c)))
    samples = []
    for j in range(M):
        w = ctx.expj(2 * ctx.pi * j / M + shift)
        z = rho * w
        samples.append(schwarzian_at(g, z) * B(z))
    coeffs = []
    for i in range(M):
        acc = ctx.fsum(samples[j] * ctx.expj(-(2 * ctx.pi * j / M + shift) * i) for j in range(M))
        coeffs.append(acc / M / rho ** i)
    # real data gives real coefficients; drop round-off imaginary parts
    tol = ctx.mpf(2) ** (-(prec // 2))
    scale = max(abs(c) for c in coeffs)
    if all(abs(c.imag) <= tol * scale for c in coeffs):
        coeffs = [ctx.mpf(c.real) for c in coeffs]
    A = Poly(coeffs)
    probe = ctx.mpf("0.211") + ctx.mpf("0.037") * 1j
    err = abs(schwarzian_at(g, probe) * B(probe) - A(probe)) / max(ctx.mpf(1), abs(A(probe)))
    if err > ctx.mpf(2) ** (-(prec // 2)):
        raise ArithmeticError("Schwarzian reconstruction failed the off-circle check")
    return SchwarzianRational(A, B, b)


@dataclass
class CubicPotential:
    a: object
    b: object
    zstar: object
    lam: object
    prec: int
    candidates: list = field(default_factory=list)

    def to_json(self, digits: Optional[int] = None) -> dict:
        digits = digits or digits_for(self.prec) // 2
        return {"a": _cjson(self.a, self.prec, digits), "b": _cjson(self.b, self.prec, digits),
                "zstar": _cjson(self.zstar, self.prec, digits),
                "lambda": _cjson(self.lam, self.prec, digits), "prec_bits": self.prec}


def _cjson(x, prec: int, digits: int) -> dict:
    bc = BigComplex.of(x, prec)
    d = bc.to_json(digits)
    return {"re": d["re"], "im": d["im"]}


def _fifth_roots(ctx, rhs):
    r = abs(rhs) ** (ctx.mpf(1) / 5)
    t = ctx.arg(rhs)
    return [r * ctx.expj((t + 2 * ctx.pi * j) / 5) for j in range(5)]


def select_lambda(ctx, rhs, previous=None, real_tol=None):
    """Branch of ``lam**5 = rhs``: real root for real ``rhs``, else continuation."""
    rhs = ctx.mpc(rhs)
    real_tol = real_tol if real_tol is not None else ctx.mpf(2) ** (-(ctx.prec // 2))
    if abs(rhs.imag) <= real_tol * abs(rhs):
        x = rhs.real
        root = abs(x) ** (ctx.mpf(1) / 5)
        return ctx.mpf(root if x >= 0 else -root)
    roots = _fifth_roots(ctx, rhs)
    if previous is not None:
        p = ctx.mpc(previous)
        return min(roots, key=lambda z: abs(ctx.arg(z / p)))
    for z in roots:
        t = ctx.arg(z)
        if -ctx.pi / 5 < t <= ctx.pi / 5:
            return z
    return min(roots, key=lambda z: abs(ctx.arg(z)))


def _pick_zstar(ctx, roots, tol):
    def key(z):
        return (abs(z), -z.real, -z.imag)
    roots = sorted(roots, key=key)
    best = roots[0]
    ties = [z for z in roots if abs(abs(z) - abs(best)) <= tol * max(1, abs(best))]
    ties.sort(key=lambda z: (-z.real, -z.imag))
    return ties[0]


def normalize_cubic(S: SchwarzianRational, prec: int = DEFAULT_PREC, previous_lambda=None) -> CubicPotential:
    """Recenter at the zero of ``S''`` nearest 0 and rescale to the cubic form."""
    if S.is_zero():
        raise ValueError("Schwarzian vanishes identically")
    ctx = context(prec)
    num2 = S.second_derivative_numerator()
    if not num2.is_exact():
        cmax = max(abs(c) for c in num2.coeffs)
        tol = ctx.mpf(2) ** (-(prec // 2)) * cmax
        coeffs = list(num2.coeffs)
        while coeffs and abs(coeffs[-1]) <= tol:
            coeffs.pop()
        num2 = Poly(coeffs)
    if num2.degree < 1:
        raise ValueError("second derivative of the Schwarzian has no zero")
    roots = [r.value for r, _ in complex_roots(num2, prec)]
    roots = [ctx.mpc(r) for r in roots]
    zs = _pick_zstar(ctx, roots, ctx.mpf(2) ** (-(prec // 3)))
    zs_use = ctx.mpf(zs.real) if abs(zs.imag) <= ctx.mpf(2) ** (-(prec // 2)) * max(1, abs(zs)) else zs
    if num2.is_exact() and zs_use == 0:
        zs_use = Fraction(0)
    d = S.derivatives(zs_use if is_exact(zs_use) else zs_use, 3)
    d = [to_ctx(ctx, x) if is_exact(x) else ctx.mpmathify(x) for x in d]
    if d[3] == 0 or abs(d[3]) <= ctx.mpf(2) ** (-(prec // 2)) * max(abs(x) for x in d):
        raise ValueError("degenerate third derivative")
    lam = select_lambda(ctx, -48 / d[3], previous_lambda)
    a = lam ** 3 * d[1] / 4
    b = lam ** 2 * d[0] / 56
    return CubicPotential(a=a, b=b, zstar=zs_use, lam=lam, prec=prec, candidates=roots)


# pole estimates over a range of k


@dataclass
class PoleEstimate:
    n: int
    m: int
    k: int
    potential: Optional[CubicPotential]
    assignments: dict = field(default_factory=dict)
    status: str = "ok"
    pre_asymptotic: bool = False
    certified: bool = False
    error: str = ""

    def to_json(self, digits: int = 30) -> dict:
        out = {"n": self.n, "m": self.m, "k": self.k, "status": self.status}
        if self.potential is not None:
            out.update(self.potential.to_json(digits))
        out["pre_asymptotic"] = self.pre_asymptotic
        out["certified"] = self.certified
        if self.error:
            out["error"] = self.error
        return out


@dataclass
class PoleSequence:
    n: int
    m: int
    estimates: list
    diffs: list
    extrapolated: object
    prec: int

    def values(self) -> list:
        return [e.potential.a if e.potential is not None else None for e in self.estimates]

    def to_json(self, digits: int = 30) -> dict:
        ext = None
        if self.extrapolated is not None:
            ext = _cjson(self.extrapolated, self.prec, digits)
        estimates = []
        for i, e in enumerate(self.estimates):
            ej = e.to_json(digits)
            ej["diffs"] = [d for d in self.diffs[: i]]
            estimates.append(ej)
        return {"n": self.n, "m": self.m, "prec_bits": self.prec, "estimates": estimates,
                "diffs": self.diffs, "extrapolated": ext, "extrapolation": "a + c/k + d/k^2 on the last three terms"}


def richardson3(ks: Sequence[int], values: Sequence):
    """Limit ``A`` of the fit ``A + c/k + d/k^2`` through three points."""
    if len(ks) != 3:
        raise ValueError("need three points")
    ctx = context(DEFAULT_PREC)
    M = ctx.matrix([[1, ctx.mpf(1) / k, ctx.mpf(1) / k ** 2] for k in ks])
    sol = ctx.lu_solve(M, ctx.matrix([ctx.mpmathify(v) for v in values]))
    return sol[0]


def _critical_points(solution_data) -> list:
    return [t.z for t in solution_data if t.z is not INF and t.nu >= 1]


def tritronquee_maps(n: int, m: int, ks: Sequence[int], prec: int = DEFAULT_PREC,
                     variant: str = "published", shared: Optional[dict] = None):
    """Solve ``f_k^{n,m}`` for each ``k`` with continuation between successive k.

    Yields ``(k, solutions or exception)``.  ``shared`` caches resultants by
    index so a second precision run does not redo the exact elimination.
    """
    previous = None
    for k in ks:
        data = critical_data(FamilyIndex.tritronquee(n, m, k, variant))
        try:
            if n == m:
                key = (n, m, k, variant)
                if shared is not None and key in shared:
                    res = shared[key]
                else:
                    res = resultant_polynomial(data)[0]
                    if shared is not None:
                        shared[key] = res
                sols = solve_one(data, prec=prec, previous=previous, resultant=res)
            else:
                sols = solve(data, prec=prec, previous=previous)
        except Exception as e:  # noqa: BLE001 - reported per k
            yield k, e
            continue
        if sols and sols[0].admissible:
            previous = sols[0].assignments
        yield k, sols


def _estimate(n, m, k, sols, prec, previous_lambda):
    if isinstance(sols, Exception):
        return PoleEstimate(n, m, k, None, status="error", error=str(sols))
    sel = sols[0]
    if not sel.admissible:
        return PoleEstimate(n, m, k, None, status="no admissible solution")
    S = schwarzian(sel.map, _critical_points(sel.data), prec)
    pot = normalize_cubic(S, prec, previous_lambda)
    return PoleEstimate(n, m, k, pot, assignments=sel.assignments,
                        pre_asymptotic=k < PRE_ASYMPTOTIC_BELOW)


def _close(x, y, digits: int) -> bool:
    x, y = complex(x), complex(y)
    return abs(x - y) <= 10.0 ** (-digits) * max(1.0, abs(x))


def pole_sequence(n: int, m: int, k_range: Sequence[int], prec: int = DEFAULT_PREC,
                  variant: str = "published", certify: bool = True, report_digits: int = 10) -> PoleSequence:
    """Per-k cubic potentials, successive differences and a three-term extrapolation.

    With ``certify`` the whole computation is repeated at twice the
    precision and each estimate is marked certified when ``a`` agrees to
    ``report_digits`` digits.
    """
    ks = list(k_range)
    shared: dict = {}
    estimates = []
    lam = None
    for k, sols in tritronquee_maps(n, m, ks, prec, variant, shared):
        try:
            est = _estimate(n, m, k, sols, prec, lam)
        except Exception as e:  # noqa: BLE001
            est = PoleEstimate(n, m, k, None, status="error", error=str(e))
        if est.potential is not None:
            lam = est.potential.lam
        estimates.append(est)
    if certify:
        lam2 = None
        for (k, sols), est in zip(tritronquee_maps(n, m, ks, 2 * prec, variant, shared), estimates):
            try:
                e2 = _estimate(n, m, k, sols, 2 * prec, lam2)
            except Exception:  # noqa: BLE001
                continue
            if e2.potential is not None:
                lam2 = e2.potential.lam
            if est.potential is not None and e2.potential is not None:
                est.certified = (_close(est.potential.a, e2.potential.a, report_digits)
                                 and _close(est.potential.b, e2.potential.b, report_digits))
    vals = [(e.k, e.potential.a) for e in estimates if e.potential is not None]
    diffs = [float(abs(complex(vals[i + 1][1]) - complex(vals[i][1]))) for i in range(len(vals) - 1)]
    ext = None
    fit = [(k, v) for k, v in vals if k >= 1]
    if len(fit) >= 3:
        last = fit[-3:]
        ext = richardson3([k for k, _ in last], [v for _, v in last])
    return PoleSequence(n, m, estimates, diffs, ext, prec)
