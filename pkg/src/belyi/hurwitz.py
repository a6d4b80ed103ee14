"""Locate unknown critical points by forcing the evaluation matrix to drop rank.

With one free unknown ``u`` the matrix splits into a constant block ``F``
(fixed points) and a block ``U(u)``.  If ``K`` is an exact kernel basis of
``F``, then ``M(u)`` is rank deficient exactly when the square-plus-one
matrix ``U(u) K`` is, and its maximal minors are polynomials in ``u``
equal (up to constants) to the maximal minors of ``M(u)`` that keep all
fixed rows.  These are sampled at integer nodes, interpolated exactly, and
their gcd is the defining polynomial of the admissible locations.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Optional, Sequence

from . import linalg
from .critical_map import (INF, CriticalTriple, EvalMatrix, assemble, check_distinct, condition_rows,
                           normalize_pair, nullspace, point_to_json, relative_residual, rh_degree,
                           split_vector, verify_critical_data)
from .numeric import DEFAULT_PREC, BigComplex, context, digits_for, to_ctx
from .poly import Poly, RationalMap, gcd_many, interpolate
from .roots import complex_roots, isolate_real_roots, refine_root
from .scalars import GaussRat, exact, is_exact, scalar_to_json


@dataclass(frozen=True)
class Unknown:
    name: str

    def __repr__(self) -> str:
        return f"?{self.name}"


@dataclass(frozen=True)
class Tie:
    """``target = scale * source + offset``."""

    target: str
    source: str
    scale: Fraction = Fraction(-1)
    offset: Fraction = Fraction(1)

    def apply(self, x):
        return self.scale * x + self.offset


@dataclass(frozen=True)
class Filter:
    """Inequality on an unknown: ``op`` is ``"real"``, ``">"`` or ``"<"``."""

    unknown: str
    op: str
    value: Optional[Fraction] = None

    def holds(self, x, tol) -> bool:
        im = abs(x.imag) if hasattr(x, "imag") else 0
        if self.op == "real":
            return im <= tol
        if im > tol:
            return False
        re = x.real if hasattr(x, "real") else x
        if self.op == ">":
            return re > self.value + tol
        if self.op == "<":
            return re < self.value - tol
        raise ValueError(f"unknown filter {self.op!r}")

    def to_json(self) -> dict:
        out = {"unknown": self.unknown, "op": self.op}
        if self.value is not None:
            out["value"] = scalar_to_json(self.value)
        return out


@dataclass
class HurwitzData:
    triples: list
    ties: list = field(default_factory=list)
    filters: list = field(default_factory=list)
    label: str = ""

    def unknown_names(self) -> list[str]:
        return [t.z.name for t in self.triples if isinstance(t.z, Unknown)]

    def free_unknowns(self) -> list[str]:
        tied = {t.target for t in self.ties}
        return [n for n in self.unknown_names() if n not in tied]

    def degree(self) -> int:
        return rh_degree(self.triples)

    def instantiate(self, values: dict) -> list[CriticalTriple]:
        """Replace unknowns by values; ties are applied to ``values`` first."""
        vals = dict(values)
        for t in self.ties:
            vals[t.target] = t.apply(vals[t.source])
        out = []
        for t in self.triples:
            z = vals[t.z.name] if isinstance(t.z, Unknown) else t.z
            out.append(CriticalTriple(z, t.nu, t.b))
        return out

    def instantiate_values(self, values: dict) -> dict:
        vals = dict(values)
        for t in self.ties:
            vals[t.target] = t.apply(vals[t.source])
        return vals

    def fully_tied(self, free: str, u) -> dict:
        vals = {free: u}
        for t in self.ties:
            vals[t.target] = t.apply(vals[t.source])
        return vals

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "triples": [{"z": (repr(t.z) if isinstance(t.z, Unknown) else point_to_json(t.z)),
                         "nu": t.nu, "b": point_to_json(t.b)} for t in self.triples],
            "ties": [{"target": t.target, "source": t.source, "scale": scalar_to_json(t.scale),
                      "offset": scalar_to_json(t.offset)} for t in self.ties],
            "filters": [f.to_json() for f in self.filters],
        }


def _same_value(a, b) -> bool:
    if a is INF or b is INF:
        return a is b
    return a == b


def validate(data: HurwitzData) -> list[str]:
    """Admissibility violations; empty list means the data is admissible."""
    problems = []
    values = []
    for t in data.triples:
        if not any(_same_value(t.b, v) for v in values):
            values.append(t.b)
    if len(values) < 3:
        problems.append("(i) fewer than three distinct critical values")
    total = sum(t.nu for t in data.triples)
    if total % 2:
        problems.append("(ii) total multiplicity is odd")
    for v in values:
        s = sum(t.nu for t in data.triples if _same_value(t.b, v))
        if 2 * s > total:
            problems.append(f"(iii) multiplicity over value {v} exceeds half the total")
    names = data.unknown_names()
    if len(set(names)) != len(names):
        problems.append("unknown names repeat")
    for t in data.ties:
        if t.target not in names or t.source not in names:
            problems.append(f"tie refers to a missing unknown: {t.target} or {t.source}")
    return problems


# minors as polynomials in the free unknown


@dataclass
class ReducedSystem:
    n: int
    kernel: list          # exact kernel basis of the fixed block
    kernel_int: list      # integer rescaling of the same basis
    unknown_triples: list  # triples whose point depends on a free unknown
    free: str
    frees: tuple = ()


def reduce_fixed_block(data: HurwitzData, max_free: int = 1) -> ReducedSystem:
    free = data.free_unknowns()
    if not 1 <= len(free) <= max_free:
        raise ValueError(f"expected one free unknown after ties, found {len(free)}")
    n = data.degree()
    fixed = [t for t in data.triples if not isinstance(t.z, Unknown)]
    check_distinct([t.z for t in fixed])
    rows = []
    for t in fixed:
        rows.extend(condition_rows(t.z, t.nu, t.b, n))
    if any(isinstance(x, GaussRat) for r in rows for x in r):
        raise NotImplementedError("minor polynomials need rational fixed data")
    ncols = 2 * (n + 1)
    if linalg.rank(rows, ncols) != len(rows):
        raise ValueError("fixed conditions are linearly dependent")
    K = linalg.nullspace(rows, ncols)
    return ReducedSystem(n=n, kernel=K, kernel_int=[linalg.integerize(v) for v in K],
                         unknown_triples=[t for t in data.triples if isinstance(t.z, Unknown)],
                         free=free[0], frees=tuple(free))


def _unknown_rows(data: HurwitzData, red: ReducedSystem, u) -> list[list]:
    vals = u if isinstance(u, dict) else data.fully_tied(red.free, u)
    rows = []
    for t in red.unknown_triples:
        rows.extend(condition_rows(vals[t.z.name], t.nu, t.b, red.n))
    return rows


def _int_row(row) -> list[int]:
    den = 1
    for x in row:
        den = lcm(den, Fraction(x).denominator)
    return [int(Fraction(x) * den) for x in row]


def reduced_matrix_at(data: HurwitzData, red: ReducedSystem, u0) -> list[list[int]]:
    """``U(u0) K`` as an integer matrix (rows rescaled by constants)."""
    out = []
    for row in _unknown_rows(data, red, Fraction(u0)):
        r = _int_row(row)
        out.append([sum(a * b for a, b in zip(r, v) if a) for v in red.kernel_int])
    return out


def _minors_of(M: list[list[int]]) -> list[int]:
    rows, cols = len(M), len(M[0]) if M else 0
    if rows == cols + 1:
        return linalg.signed_minors(M)
    if rows > cols:
        return [linalg.bareiss_det([M[i] for i in idx]) for idx in combinations(range(rows), cols)]
    raise ValueError("evaluation matrix is rank deficient for every value of the unknown")


def _nodes(count: int) -> list[int]:
    out = [0]
    k = 1
    while len(out) < count:
        out.append(k)
        if len(out) < count:
            out.append(-k)
        k += 1
    return out


def degree_bound(data: HurwitzData) -> int:
    n = data.degree()
    rows = sum(t.nu + 1 for t in data.triples if isinstance(t.z, Unknown))
    return n * rows


def minor_polynomials(data: HurwitzData, check_nodes: int = 3) -> list[Poly]:
    """Maximal minors of the reduced matrix as exact polynomials in the free unknown.

    Sampling uses ``deg bound + 1`` integer nodes; ``check_nodes`` extra
    nodes confirm the reconstruction against direct evaluation.
    """
    red = reduce_fixed_block(data)
    count = degree_bound(data) + 1
    nodes = _nodes(count + check_nodes)
    samples = [_minors_of(reduced_matrix_at(data, red, u0)) for u0 in nodes[:count]]
    polys = []
    for i in range(len(samples[0])):
        polys.append(interpolate([(Fraction(x), Fraction(s[i])) for x, s in zip(nodes, samples)]))
    for u0 in nodes[count:]:
        direct = _minors_of(reduced_matrix_at(data, red, u0))
        for p, d in zip(polys, direct):
            if p(Fraction(u0)) != d:
                raise ArithmeticError("interpolated minor disagrees with direct evaluation")
    return polys


def collision_values(data: HurwitzData) -> list[Fraction]:
    """Values of the free unknown that make two points coincide."""
    red_free = data.free_unknowns()
    if len(red_free) != 1:
        return []
    free = red_free[0]
    fixed = [t.z for t in data.triples if not isinstance(t.z, Unknown) and t.z is not INF]
    # each unknown point is  a*u + c
    affine = {free: (Fraction(1), Fraction(0))}
    for t in data.ties:
        a, c = affine[t.source]
        affine[t.target] = (t.scale * a, t.scale * c + t.offset)
    out = set()
    names = data.unknown_names()
    for name in names:
        a, c = affine[name]
        for p in fixed:
            if is_exact(p) and not isinstance(p, GaussRat):
                out.add((p - c) / a)
    for x, y in combinations(names, 2):
        (a1, c1), (a2, c2) = affine[x], affine[y]
        if a1 != a2:
            out.add((c2 - c1) / (a1 - a2))
    return sorted(out)


def resultant_polynomial(data: HurwitzData, minors: Optional[Sequence[Poly]] = None):
    """gcd of the minors with collision factors removed, as a primitive integer polynomial.

    Returns ``(resultant, raw_gcd)``.
    """
    if minors is None:
        minors = minor_polynomials(data)
    g = gcd_many(list(minors))
    raw = g
    for c in collision_values(data):
        lin = Poly([-c, Fraction(1)])
        while g.degree > 0 and g(c) == 0:
            g = g.exact_div(lin)
    return g.primitive(), raw


# solutions


@dataclass
class HurwitzSolution:
    assignments: dict
    resultant: Optional[Poly]
    map: Optional[RationalMap]
    admissible: bool
    selected: bool = False
    exact: bool = False
    kernel_dim: int = 1
    residual: object = None
    verified: bool = False
    certified: bool = True
    prec: int = DEFAULT_PREC
    bracket: Optional[tuple] = None
    data: list = field(default_factory=list)

    def value(self, name: str):
        return self.assignments[name]

    def to_json(self) -> dict:
        digits = digits_for(self.prec) // 2
        assign = {}
        for k, v in sorted(self.assignments.items()):
            if is_exact(v):
                assign[k] = {"exact": scalar_to_json(v)}
            else:
                bc = v if isinstance(v, BigComplex) else BigComplex.of(v, self.prec)
                assign[k] = bc.to_json(digits)
        out = {
            "assignments": assign,
            "resultant": [str(int(c)) for c in self.resultant.coeffs] if self.resultant is not None else None,
            "admissible": self.admissible,
            "selected": self.selected,
            "exact": self.exact,
            "kernel_dim": self.kernel_dim,
            "verified": self.verified,
            "certified": self.certified,
            "prec_bits": self.prec,
        }
        if self.map is not None:
            if self.exact:
                out["map"] = self.map.to_json()
            else:
                out["map"] = {
                    "P": [_num_str(c, digits) for c in self.map.P.coeffs],
                    "Q": [_num_str(c, digits) for c in self.map.Q.coeffs],
                }
        if self.residual is not None:
            out["residual"] = _num_str(self.residual, 6)
        return out


def _num_str(x, digits: int):
    import mpmath
    if is_exact(x):
        return scalar_to_json(x)
    if hasattr(x, "imag") and x.imag != 0:
        return {"re": mpmath.nstr(x.real, digits), "im": mpmath.nstr(x.imag, digits)}
    return mpmath.nstr(x.real if hasattr(x, "real") else x, digits)


class NoAdmissibleSolution(Exception):
    def __init__(self, resultant):
        super().__init__("no admissible solution")
        self.resultant = resultant


def _exact_map(triples: Sequence[CriticalTriple]):
    n = rh_degree(triples)
    M = assemble(triples, n)
    basis = nullspace(M)
    if not basis:
        return None, 0
    P, Q = basis[0]
    return RationalMap(P, Q), len(basis)


def solve_fixed(data: HurwitzData) -> list[HurwitzSolution]:
    triples = list(data.triples)
    f, dim = _exact_map(triples)
    if f is None:
        return [HurwitzSolution({}, None, None, admissible=False, kernel_dim=0)]
    report = verify_critical_data(f, triples)
    return [HurwitzSolution({}, None, f, admissible=True, selected=True, exact=True, kernel_dim=dim,
                            verified=report.ok, data=triples)]


def numeric_map(data: HurwitzData, red: ReducedSystem, u, prec: int):
    """Map at a numeric value of the free unknown via the reduced kernel."""
    ctx = context(prec)
    if isinstance(u, dict):
        uu = {k: (v if is_exact(v) else to_ctx(ctx, v)) for k, v in u.items()}
        uu = {k: to_ctx(ctx, v) for k, v in data.instantiate_values(uu).items()}
    else:
        uu = data.fully_tied(red.free, to_ctx(ctx, u))
    Kn = [[to_ctx(ctx, x) for x in v] for v in red.kernel]
    rows = _unknown_rows(data, red, uu)
    UK = [[ctx.fsum(a * b for a, b in zip(r, v)) for v in Kn] for r in rows]
    c, ratio = linalg.numeric_kernel(ctx, UK, len(Kn))
    ncols = 2 * (red.n + 1)
    vec = [ctx.fsum(c[j] * Kn[j][i] for j in range(len(Kn))) for i in range(ncols)]
    P, Q = normalize_pair(*split_vector(vec, red.n))
    full = list(P.coeffs) + [ctx.mpf(0)] * (red.n + 1 - len(P.coeffs)) + \
        list(Q.coeffs) + [ctx.mpf(0)] * (red.n + 1 - len(Q.coeffs))
    # residual against the complete matrix
    triples = data.instantiate(uu)
    allrows = []
    for t in triples:
        allrows.extend(condition_rows(t.z if t.z is INF or not is_exact(t.z) else to_ctx(ctx, t.z),
                                      t.nu, t.b if t.b is INF else to_ctx(ctx, t.b), red.n))
    res = relative_residual(ctx, allrows, full)
    return RationalMap(_clean(ctx, P), _clean(ctx, Q)), res, ratio, triples


def _clean(ctx, p: Poly) -> Poly:
    """Drop imaginary parts that are pure round-off for real data."""
    return Poly([ctx.mpf(c.real) if hasattr(c, "imag") and c.imag == 0 else c for c in p.coeffs])


def _values_json(vals: dict):
    return vals


def solve_one(data: HurwitzData, prec: int = DEFAULT_PREC, previous: Optional[dict] = None,
              minors: Optional[Sequence[Poly]] = None,
              resultant: Optional[Poly] = None) -> list[HurwitzSolution]:
    red = reduce_fixed_block(data)
    res = resultant if resultant is not None else resultant_polynomial(data, minors)[0]
    free = red.free
    need_real = any(f.op in ("real", ">", "<") for f in data.filters)
    candidates = []
    if res.degree >= 1:
        if need_real:
            for b in isolate_real_roots(res):
                if b.lo == b.hi:
                    candidates.append((b.lo, (b.lo, b.hi)))
                else:
                    candidates.append((refine_root(b, prec + 32), (b.lo, b.hi)))
        else:
            for r, _m in complex_roots(res, prec + 32):
                candidates.append((r, None))
    tol = Fraction(1, 1 << (prec // 2))
    sols = []
    for value, bracket in candidates:
        if isinstance(value, BigComplex):
            ctx = context(prec + 32)
            uval = value.value if value.value.imag != 0 else ctx.mpf(value.value.real)
        else:
            uval = value
        vals = data.fully_tied(free, uval)
        ok = all(f.holds(vals[f.unknown], float(tol)) for f in data.filters)
        if not ok:
            continue
        triples_points = [vals[n] for n in data.unknown_names()] + \
            [t.z for t in data.triples if not isinstance(t.z, Unknown)]
        try:
            check_distinct(triples_points)
        except ValueError:
            continue
        if is_exact(uval):
            triples = data.instantiate({free: uval})
            f, dim = _exact_map(triples)
            report = verify_critical_data(f, triples) if f is not None else None
            sols.append(HurwitzSolution(vals, res, f, admissible=True, exact=True, kernel_dim=dim,
                                        verified=bool(report), prec=prec, bracket=bracket, data=triples))
            continue
        f, resid, ratio, triples = numeric_map(data, red, uval, prec)
        f2, _, _, _ = numeric_map(data, red, uval, 2 * prec)
        certified = _maps_agree(f, f2, prec)
        tolv = context(prec).mpf(2) ** (-(prec // 2))
        report = verify_critical_data(f, triples, tol=tolv)
        dim = 1 if ratio > context(prec).mpf(2) ** (-(prec // 4)) else 2
        ctxp = context(prec)
        stored = {k: (v if is_exact(v) else BigComplex(ctxp.mpc(v), prec)) for k, v in vals.items()}
        sols.append(HurwitzSolution(stored, res, f, admissible=True, kernel_dim=dim, residual=resid,
                                    verified=report.ok, certified=certified, prec=prec,
                                    bracket=bracket, data=triples))
    _order(sols, free, previous)
    if not sols:
        return [HurwitzSolution({}, res, None, admissible=False, prec=prec)]
    return sols


def _maps_agree(f: RationalMap, g: RationalMap, prec: int) -> bool:
    ctx = context(prec)
    tol = ctx.mpf(2) ** (-(prec // 2))
    a = list(f.P.coeffs) + list(f.Q.coeffs)
    b = list(g.P.coeffs) + list(g.Q.coeffs)
    if len(a) != len(b):
        return False
    scale = max(abs(x) for x in a)
    return all(abs(ctx.mpc(x) - ctx.mpc(y)) <= tol * scale for x, y in zip(a, b))


def _as_complex(v) -> complex:
    if isinstance(v, BigComplex):
        return complex(v.value)
    return complex(v)


def _order(sols: list[HurwitzSolution], free: str, previous: Optional[dict]) -> None:
    if previous and free in previous:
        ref = _as_complex(previous[free])
        sols.sort(key=lambda s: (abs(_as_complex(s.assignments[free]) - ref),
                                 _as_complex(s.assignments[free]).real))
    else:
        sols.sort(key=lambda s: (_as_complex(s.assignments[free]).real,
                                 _as_complex(s.assignments[free]).imag))
    for i, s in enumerate(sols):
        s.selected = i == 0


def solve(data: HurwitzData, prec: int = DEFAULT_PREC, previous: Optional[dict] = None,
          seeds: Optional[Sequence[dict]] = None) -> list[HurwitzSolution]:
    """Dispatch on the number of free unknowns (0, 1 or 2)."""
    problems = validate(data)
    if problems:
        raise ValueError("inadmissible data: " + "; ".join(problems))
    free = data.free_unknowns()
    if not data.unknown_names():
        return solve_fixed(data)
    if len(free) == 1:
        return solve_one(data, prec=prec, previous=previous)
    if len(free) == 2:
        from .newton import solve_two
        return solve_two(data, prec=prec, previous=previous, seeds=seeds)
    raise NotImplementedError("three or more free unknowns are out of scope")


def _point_from_json(obj):
    if obj == "inf":
        return INF
    if isinstance(obj, dict) and "unknown" in obj:
        return Unknown(str(obj["unknown"]))
    return exact(obj)


def data_from_json(obj: dict) -> HurwitzData:
    """Inverse of :meth:`HurwitzData.to_json`; unknown points are ``{"unknown": name}``
    (or the string ``"?name"``)."""
    triples = []
    for t in obj["triples"]:
        z = t["z"]
        if isinstance(z, str) and z.startswith("?"):
            z = {"unknown": z[1:]}
        triples.append(CriticalTriple(_point_from_json(z), int(t["nu"]), _point_from_json(t["b"])))
    ties = [Tie(t["target"], t["source"], exact(t.get("scale", "-1")), exact(t.get("offset", "1")))
            for t in obj.get("ties", [])]
    filters = [Filter(f["unknown"], f["op"], exact(f["value"]) if "value" in f else None)
               for f in obj.get("filters", [])]
    return HurwitzData(triples, ties=ties, filters=filters, label=obj.get("label", ""))
