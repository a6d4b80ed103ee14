"""Critical data generators for the harmonic, n-Airy and tritronquee families.

Also the differential recursion that builds the harmonic maps ``f_{n,k}``
from ``f_{n,k-1}`` and the composition ``A_n o f_0^{0,0}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .critical_map import INF, CriticalTriple, assemble, nullspace, rh_degree, verify_critical_data
from .hurwitz import Filter, HurwitzData, Tie, Unknown
from .numeric import context, to_ctx
from .poly import Poly, RationalMap, compose
from .scalars import I

HARMONIC = "harmonic"
AIRY = "airy"
TRITRONQUEE = "tritronquee"

# "lemma": five-point data with z_{+-1} of multiplicity 2k.
# "published": z_{+-1} of multiplicity 2k-1 from k = 2 on, which is the
# data the printed P_2..P_5 correspond to.
TRITRONQUEE_VARIANTS = ("lemma", "published")


@dataclass(frozen=True)
class FamilyIndex:
    family: str
    n: int = 0
    m: int = 0
    k: int = 0
    variant: str = "lemma"

    def __post_init__(self):
        if self.family not in (HARMONIC, AIRY, TRITRONQUEE):
            raise ValueError(f"unknown family {self.family!r}")
        if min(self.n, self.m, self.k) < 0:
            raise ValueError("family indices must be non-negative")
        if self.variant not in TRITRONQUEE_VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")

    @classmethod
    def harmonic(cls, n: int, k: int) -> "FamilyIndex":
        return cls(HARMONIC, n=n, k=k)

    @classmethod
    def airy(cls, n: int) -> "FamilyIndex":
        return cls(AIRY, n=n)

    @classmethod
    def tritronquee(cls, n: int, m: int, k: int, variant: str = "lemma") -> "FamilyIndex":
        return cls(TRITRONQUEE, n=n, m=m, k=k, variant=variant)

    def degree(self) -> int:
        if self.family == HARMONIC:
            return 2 * self.n + 4 * self.k + 2
        if self.family == AIRY:
            return 3 * self.n + 1
        if self.variant == "published" and self.k >= 2:
            return 2 * self.n + 2 * self.m + 5 * self.k + 1
        return 2 * self.n + 2 * self.m + 5 * self.k + 3

    def label(self) -> str:
        if self.family == HARMONIC:
            return f"harmonic(n={self.n},k={self.k})"
        if self.family == AIRY:
            return f"airy(n={self.n})"
        tag = "" if self.variant == "lemma" else f",{self.variant}"
        return f"tritronquee(n={self.n},m={self.m},k={self.k}{tag})"

    def to_json(self) -> dict:
        out = {"family": self.family}
        if self.family == HARMONIC:
            out.update(n=self.n, k=self.k)
        elif self.family == AIRY:
            out.update(n=self.n)
        else:
            out.update(n=self.n, m=self.m, k=self.k, variant=self.variant)
        return out


def _tritronquee_nus(n: int, m: int, k: int, variant: str) -> tuple[int, int, int]:
    """Multiplicities at 0, 1 and at the two unknown points."""
    if variant == "published" and k >= 2:
        return 2 * (n + k), 2 * (m + k), 2 * k - 1
    return 2 * (n + k) + 1, 2 * (m + k) + 1, 2 * k


def critical_data(idx: FamilyIndex) -> HurwitzData:
    n, m, k = idx.n, idx.m, idx.k
    if idx.family == HARMONIC:
        a, c = 2 * k, 2 * n + 2 * k + 1
        triples = [CriticalTriple(Fraction(1), a, Fraction(1)),
                   CriticalTriple(I, c, I),
                   CriticalTriple(Fraction(-1), a, Fraction(1)),
                   CriticalTriple(-I, c, -I)]
        return HurwitzData(triples, label=idx.label())
    if idx.family == AIRY:
        triples = [CriticalTriple(Fraction(0), 2 * n, Fraction(0)),
                   CriticalTriple(Fraction(1), 2 * n, Fraction(1)),
                   CriticalTriple(INF, 2 * n, INF)]
        return HurwitzData(triples, label=idx.label())
    nu0, nu1, nuu = _tritronquee_nus(n, m, k, idx.variant)
    triples = [CriticalTriple(INF, 2 * (m + n + k + 1), INF),
               CriticalTriple(Unknown("z1"), nuu, Fraction(1)),
               CriticalTriple(Fraction(0), nu0, Fraction(0)),
               CriticalTriple(Unknown("zm1"), nuu, Fraction(0)),
               CriticalTriple(Fraction(1), nu1, Fraction(1))]
    ties = [Tie("z1", "zm1")] if n == m else []
    filters = [Filter("zm1", ">", Fraction(1)), Filter("z1", "<", Fraction(0))]
    return HurwitzData(triples, ties=ties, filters=filters, label=idx.label())


def kernel_map(idx: FamilyIndex) -> RationalMap:
    """Map of a family with no unknown points, straight from the kernel."""
    data = critical_data(idx)
    if data.unknown_names():
        raise ValueError("family has unknown critical points; use the solver")
    triples = data.triples
    basis = nullspace(assemble(triples, rh_degree(triples)))
    if len(basis) != 1:
        raise ArithmeticError(f"kernel dimension {len(basis)} for {idx.label()}")
    return RationalMap(*basis[0])


# harmonic recursion


def gamma(n: int, k: int) -> Fraction:
    g = Fraction(2 * n + 2)
    for l in range(1, k + 1):
        g *= Fraction(4 * l + 2 * n + 2, 4 * l)
    return g


def gamma_empirical(n: int, k: int) -> Fraction:
    """``(2n+2) prod (2l+n+1)/(2l+n)``: the slope the kernel maps actually have."""
    g = Fraction(2 * n + 2)
    for l in range(1, k + 1):
        g *= Fraction(2 * l + n + 1, 2 * l + n)
    return g


CAUCHY_RULES = ("conjecture", "empirical")


def potential(n: int, k: int) -> Poly:
    """``V_{n,k} = (4k+2n+2)(z^2 (4k+2n+1) - 2n - 1)``."""
    c = 4 * k + 2 * n + 2
    return Poly([Fraction(-c * (2 * n + 1)), Fraction(0), Fraction(c * (4 * k + 2 * n + 1))])


def _integrate(p: Poly, c0) -> Poly:
    coeffs = [c0] + [c / (j + 1) for j, c in enumerate(p.coeffs)]
    return Poly(coeffs)


def _double_integral(p: Poly, value, slope) -> Poly:
    return _integrate(_integrate(p, slope), value)


@dataclass
class RecursionState:
    n: int
    k: int
    P: Poly
    Q: Poly
    gamma: Fraction

    @property
    def map(self) -> RationalMap:
        return RationalMap(self.P, self.Q)

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "P": self.P.to_json(), "Q": self.Q.to_json(),
                "gamma": f"{self.gamma.numerator}/{self.gamma.denominator}"}


def cauchy_normalize(f: RationalMap, n: int) -> tuple[Poly, Poly]:
    """Scale ``(P, Q)`` so that ``P(0) = 1``."""
    p0 = f.P(Fraction(0))
    if p0 == 0:
        raise ArithmeticError("P(0) = 0; Cauchy normalization impossible")
    return f.P * (1 / p0), f.Q * (1 / p0)


def harmonic_recursion(n: int, k_max: int, cauchy: str = "conjecture") -> list[RecursionState]:
    """States ``k = 0..k_max``; each ``P_k, Q_k`` is a double antiderivative of
    ``V_{n,k} P_{k-1}`` (resp. ``Q_{k-1}``).

    ``cauchy="conjecture"`` imposes ``P(0) = 1, P'(0) = -g, (-1)^(n+1) Q(0) = 1,
    (-1)^n Q'(0) = -g`` with ``g = gamma(n, k)``.  ``cauchy="empirical"``
    uses ``P'(0) = (-1)^(n+1) gamma_empirical(n, k)`` and the same sign
    pattern; both rules agree for ``n = 0``.
    """
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    if cauchy not in CAUCHY_RULES:
        raise ValueError(f"unknown Cauchy rule {cauchy!r}")
    P0, Q0 = cauchy_normalize(kernel_map(FamilyIndex.harmonic(n, 0)), n)
    states = [RecursionState(n, 0, P0, Q0, gamma(n, 0))]
    sign = -1 if n % 2 == 0 else 1   # (-1)^(n+1)
    for k in range(1, k_max + 1):
        if cauchy == "conjecture":
            g = gamma(n, k)
            slope = -g
        else:
            g = gamma_empirical(n, k)
            slope = sign * g
        V = potential(n, k)
        prev = states[-1]
        P = _double_integral(V * prev.P, Fraction(1), slope)
        # (-1)^n Q'(0) = P'(0)
        Q = _double_integral(V * prev.Q, Fraction(sign), -sign * slope)
        states.append(RecursionState(n, k, P, Q, g))
    return states


@dataclass
class CrossCheck:
    n: int
    k: int
    confirmed: bool
    detail: str = ""

    @property
    def status(self) -> str:
        return "CONFIRMED" if self.confirmed else "FAILED"

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "status": self.status, "detail": self.detail}


def cross_check(n: int, k_max: int, cauchy: str = "conjecture",
                states: Optional[list] = None) -> list[CrossCheck]:
    """Compare recursion maps with kernel maps for ``k = 0..k_max``."""
    states = states or harmonic_recursion(n, k_max, cauchy)
    out = []
    for st in states:
        f = kernel_map(FamilyIndex.harmonic(n, st.k))
        g = st.map
        same = f.equivalent(g)
        detail = ""
        if not same:
            try:
                detail = "kernel Cauchy data: " + _cauchy_summary(f)
            except ArithmeticError as e:
                detail = str(e)
        out.append(CrossCheck(n, st.k, same, detail))
    return out


def _cauchy_summary(f: RationalMap) -> str:
    P, Q = f.P, f.Q
    p0 = P(Fraction(0))
    P, Q = P * (1 / p0), Q * (1 / p0)
    vals = (P(Fraction(0)), P.derivative()(Fraction(0)), Q(Fraction(0)), Q.derivative()(Fraction(0)))
    return "P(0)={}, P'(0)={}, Q(0)={}, Q'(0)={}".format(*map(str, vals))


# n-Airy composition


def airy_map(n: int) -> RationalMap:
    """``A_n`` normalized to fix 0, 1 and infinity."""
    f = kernel_map(FamilyIndex.airy(n))
    # the data forces A(0)=0, A(1)=1, A(inf)=inf already; reduce for a canonical form
    return f.reduce()


def base_cubic() -> RationalMap:
    """``f_0^{0,0} = -2z^3 + 3z^2``."""
    return RationalMap(Poly([0, 0, 3, -2]), Poly([1]))


def compose_airy(n: int) -> RationalMap:
    return compose(airy_map(n), base_cubic())


def composition_data(n: int) -> list[CriticalTriple]:
    """Critical data expected for ``A_n o f_0^{0,0}``."""
    return [CriticalTriple(Fraction(0), 4 * n + 1, Fraction(0)),
            CriticalTriple(Fraction(1), 4 * n + 1, Fraction(1)),
            CriticalTriple(INF, 6 * n + 2, INF),
            CriticalTriple(Fraction(-1, 2), 2 * n, Fraction(1)),
            CriticalTriple(Fraction(3, 2), 2 * n, Fraction(0))]


def composition_nullspace(n: int) -> RationalMap:
    """Map with the composition's critical data, from the kernel alone."""
    data = composition_data(n)
    basis = nullspace(assemble(data, rh_degree(data)))
    if len(basis) != 1:
        raise ArithmeticError(f"kernel dimension {len(basis)}")
    return RationalMap(*basis[0])


def composition_check(n: int) -> dict:
    g = compose_airy(n)
    h = composition_nullspace(n)
    report = verify_critical_data(g, composition_data(n))
    return {"n": n, "degree": g.degree, "equal": g.equivalent(h), "critical_data": report.ok}


# scaled convergence of f_{0,k}


SCALING_GRID = tuple(Fraction(j, 4) - 1 for j in range(9))


def chordal(a, b, ctx):
    """Spherical (chordal) distance on the Riemann sphere."""
    if ctx.isinf(a) or ctx.isinf(b):
        if ctx.isinf(a) and ctx.isinf(b):
            return ctx.mpf(0)
        w = b if ctx.isinf(a) else a
        return 2 / ctx.sqrt(1 + abs(w) ** 2)
    return 2 * abs(a - b) / ctx.sqrt((1 + abs(a) ** 2) * (1 + abs(b) ** 2))


def _eval_map(f: RationalMap, x, ctx):
    P = ctx.polyval([to_ctx(ctx, c) for c in reversed(f.P.coeffs)], x)
    Q = ctx.polyval([to_ctx(ctx, c) for c in reversed(f.Q.coeffs)], x)
    if Q == 0:
        return ctx.inf
    return P / Q


def scaled_distances(k_from: int, k_to: int, n: int = 0, prec: int = 128) -> list:
    """``d_k = max_x chordal(f_{n,k}(x/(2 sqrt k)), f_{n,k+1}(x/(2 sqrt(k+1))))`` for ``k_from <= k <= k_to``."""
    ctx = context(prec)
    maps = {k: kernel_map(FamilyIndex.harmonic(n, k)) for k in range(k_from, k_to + 2)}
    out = []
    for k in range(k_from, k_to + 1):
        best = ctx.mpf(0)
        for x in SCALING_GRID:
            xv = ctx.mpf(x.numerator) / x.denominator
            a = _eval_map(maps[k], xv / (2 * ctx.sqrt(k)), ctx)
            b = _eval_map(maps[k + 1], xv / (2 * ctx.sqrt(k + 1)), ctx)
            best = max(best, chordal(a, b, ctx))
        out.append(best)
    return out
