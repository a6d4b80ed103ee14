"""Two free unknowns: damped Newton on the square system ``U(x, y) K c = 0, l.c = 1``.

Seeds come from a cheap double precision multistart; survivors are polished
at working precision and accepted only if every maximal minor of the
reduced matrix vanishes to tolerance (the smallest singular value is tiny
and the next one is not).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .critical_map import INF, condition_rows, verify_critical_data
from .hurwitz import HurwitzData, HurwitzSolution, Unknown, _maps_agree, _order, numeric_map, reduce_fixed_block
from .numeric import BigComplex, context
from .scalars import is_exact

SEED_GRID = 13
NEWTON_STEPS = 60


def _affine(data: HurwitzData) -> dict:
    """Each unknown point as ``(free name, scale, offset)``."""
    out = {n: (n, Fraction(1), Fraction(0)) for n in data.free_unknowns()}
    for t in data.ties:
        src, a, c = out[t.source]
        out[t.target] = (src, t.scale * a, t.scale * c + t.offset)
    return out


class _System:
    """Residual and Jacobian of the square system in a given arithmetic."""

    def __init__(self, data: HurwitzData, red, frees: Sequence[str]):
        self.data = data
        self.red = red
        self.frees = tuple(frees)
        self.aff = _affine(data)
        self.blocks = []   # (free index, scale, offset, nu, b)
        for t in red.unknown_triples:
            src, a, c = self.aff[t.z.name]
            self.blocks.append((self.frees.index(src), a, c, t.nu, t.b))
        self.r = len(red.kernel)


class _Batch:
    """Float evaluation of ``U K`` for many seeds at once."""

    def __init__(self, sysm: _System, K: np.ndarray):
        n = sysm.red.n
        self.nf = len(sysm.frees)
        self.blocks = []
        j = np.arange(n + 1)
        for fi, a, c, nu, b in sysm.blocks:
            L = nu + 2
            fall = np.ones((L, n + 1))
            for l in range(1, L):
                fall[l] = fall[l - 1] * (j - l + 1)
            expo = np.maximum(j[None, :] - np.arange(L)[:, None], 0)
            mask = j[None, :] >= np.arange(L)[:, None]
            if b is INF:
                Kb = -K[n + 1:]
            else:
                Kb = K[: n + 1] - complex(b) * K[n + 1:]
            self.blocks.append((fi, complex(a), complex(c), fall * mask, expo, Kb, nu))

    def eval(self, xs: np.ndarray):
        """``UK`` of shape (S, rows, r) and per-free derivatives of the same shape."""
        UK, dUK = [], [[] for _ in range(self.nf)]
        for fi, a, c, coef, expo, Kb, nu in self.blocks:
            z = a * xs[:, fi] + c
            base = coef[None] * z[:, None, None] ** expo[None]
            R = base @ Kb
            UK.append(R[:, :-1])
            for g in range(self.nf):
                dUK[g].append(R[:, 1:] * a if g == fi else np.zeros_like(R[:, 1:]))
        return np.concatenate(UK, axis=1), [np.concatenate(d, axis=1) for d in dUK]

    def scale(self, xs: np.ndarray) -> np.ndarray:
        out = np.zeros(len(xs))
        for fi, a, c, coef, expo, Kb, nu in self.blocks:
            z = a * xs[:, fi] + c
            base = abs(coef[None, : nu + 1] * z[:, None, None] ** expo[None, : nu + 1])
            out = np.maximum(out, (base @ abs(Kb)).max(axis=(1, 2)))
        return out


def _residual(batch: _Batch, xs, c, j):
    UK, dUK = batch.eval(xs)
    S = len(xs)
    F = np.concatenate([np.einsum("srq,sq->sr", UK, c), (c[np.arange(S), j] - 1)[:, None]], axis=1)
    return F, UK, dUK


def _np_newton(batch: _Batch, seeds: np.ndarray, steps: int = NEWTON_STEPS):
    """Batched damped Newton; returns the converged ``(xs, c, j)`` triples."""
    xs = np.array(seeds, dtype=complex)
    S, nf = xs.shape
    UK, _ = batch.eval(xs)
    _, _, vh = np.linalg.svd(UK)
    c = vh[:, -1, :].conj()
    j = np.argmax(abs(c), axis=1)
    c = c / c[np.arange(S), j][:, None]
    r = c.shape[1]
    alive = np.ones(S, dtype=bool)
    for _ in range(steps):
        F, UK, dUK = _residual(batch, xs, c, j)
        J = np.zeros((S, F.shape[1], nf + r), dtype=complex)
        for g in range(nf):
            J[:, :-1, g] = np.einsum("srq,sq->sr", dUK[g], c)
        J[:, :-1, nf:] = UK
        J[np.arange(S), -1, nf + j] = 1
        step = np.zeros((S, nf + r), dtype=complex)
        for s_ in np.flatnonzero(alive):
            try:
                step[s_] = np.linalg.solve(J[s_], -F[s_])
            except np.linalg.LinAlgError:
                alive[s_] = False
        nF = np.linalg.norm(F, axis=1)
        t = np.ones(S)
        todo = alive.copy()
        for _ in range(14):
            xt = xs + t[:, None] * step[:, :nf]
            ct = c + t[:, None] * step[:, nf:]
            Ft, _, _ = _residual(batch, xt, ct, j)
            better = np.linalg.norm(Ft, axis=1) < nF
            todo &= ~better
            if not todo.any():
                break
            t = np.where(todo, t / 2, t)
        xs = np.where(alive[:, None], xt, xs)
        c = np.where(alive[:, None], ct, c)
        bad = ~np.all(np.isfinite(xs), axis=1) | (np.max(abs(np.nan_to_num(xs, nan=1e9)), axis=1) > 1e6)
        alive &= ~bad
        xs[bad] = 0
        c[bad] = 0
        if np.all(np.linalg.norm(step[alive], axis=1) < 1e-13 * (1 + np.linalg.norm(xs[alive], axis=1))):
            break
    out = []
    UK, _ = batch.eval(xs)
    scale = batch.scale(xs)
    sv = np.linalg.svd(UK, compute_uv=False)
    for s_ in np.flatnonzero(alive):
        sing = sv[s_]
        if sing[-1] > 1e-9 * scale[s_]:
            continue
        if len(sing) > 1 and sing[-2] < 1e-6 * scale[s_]:
            continue
        out.append((xs[s_], c[s_], int(j[s_])))
    return out


def _mp_newton(sysm: _System, ctx, xs0, c0, j: int, steps: int = 40):
    xs = [ctx.mpc(x) for x in xs0]
    c = [ctx.mpc(x) for x in c0]
    Kn = [[ctx.mpf(Fraction(x).numerator) / Fraction(x).denominator for x in v] for v in sysm.red.kernel]
    r = len(Kn)
    ncols = len(Kn[0])
    nf = len(xs)
    tol = ctx.mpf(2) ** (-ctx.prec + 8)

    def blocks(xs):
        UK, dUK = [], [[] for _ in range(nf)]
        for fi, a, cc, nu, b in sysm.blocks:
            z = ctx.mpf(a.numerator) / a.denominator * xs[fi] + ctx.mpf(cc.numerator) / cc.denominator
            R = condition_rows(z, nu + 1, b, sysm.red.n)
            RK = [[ctx.fsum(ctx.mpmathify(row[i]) * Kn[q][i] for i in range(ncols) if row[i] != 0)
                   for q in range(r)] for row in R]
            UK.extend(RK[:-1])
            sc = ctx.mpf(a.numerator) / a.denominator
            for g in range(nf):
                dUK[g].extend([[x * sc for x in row] for row in RK[1:]] if g == fi
                              else [[ctx.mpf(0)] * r for _ in RK[1:]])
        return UK, dUK

    def magnitude(xs):
        """Size of the terms entering the residual, for a relative test."""
        best = ctx.mpf(0)
        cmax = max(abs(v) for v in c)
        for fi, a, cc, nu, b in sysm.blocks:
            z = ctx.mpf(a.numerator) / a.denominator * xs[fi] + ctx.mpf(cc.numerator) / cc.denominator
            for row in condition_rows(z, nu, b, sysm.red.n):
                t = ctx.fsum(abs(ctx.mpmathify(row[i])) * abs(Kn[q][i])
                             for q in range(r) for i in range(ncols) if row[i] != 0)
                best = max(best, t)
        return best * cmax

    scale = None
    for _ in range(steps):
        UK, dUK = blocks(xs)
        F = [ctx.fsum(a * b for a, b in zip(row, c)) for row in UK] + [c[j] - 1]
        if scale is None:
            scale = magnitude(xs)
        if max(abs(v) for v in F) <= tol * scale:
            return xs, c, True
        J = ctx.matrix(len(F), nf + r)
        for i, row in enumerate(UK):
            for g in range(nf):
                J[i, g] = ctx.fsum(a * b for a, b in zip(dUK[g][i], c))
            for q in range(r):
                J[i, nf + q] = row[q]
        J[len(F) - 1, nf + j] = 1
        rhs = ctx.matrix([-v for v in F])
        if J.rows == J.cols:
            step = ctx.lu_solve(J, rhs)
        else:
            step = ctx.qr_solve(J, rhs)[0]
        xs = [xs[g] + step[g] for g in range(nf)]
        c = [c[q] + step[nf + q] for q in range(r)]
    UK, _ = blocks(xs)
    F = [ctx.fsum(a * b for a, b in zip(row, c)) for row in UK] + [c[j] - 1]
    return xs, c, max(abs(v) for v in F) <= ctx.mpf(2) ** (-(ctx.prec // 2)) * scale


def _default_seeds(data: HurwitzData, frees: Sequence[str]) -> list[list[complex]]:
    axes = []
    for name in frees:
        lo, hi = -4.0, 4.0
        for f in data.filters:
            if f.unknown == name and f.op == ">":
                lo = float(f.value) + 0.05
            if f.unknown == name and f.op == "<":
                hi = float(f.value) - 0.05
        if lo < -4.0 + 1e-9 and hi < 4.0:
            lo = hi - 4.0
        if hi > 4.0 - 1e-9 and lo > -4.0:
            hi = lo + 4.0
        pts = np.linspace(lo, hi, SEED_GRID)
        axes.append([complex(p, q) for p in pts for q in (0.0, 0.3)])
    seeds = []
    I0, I1 = axes
    for a in I0:
        for b in I1:
            seeds.append([a, b])
    return seeds


def _admissible(data: HurwitzData, free_vals: dict, sep: float) -> bool:
    """Filters hold and all points stay pairwise distinct."""
    allv = {k: complex(v) for k, v in data.instantiate_values(free_vals).items()}
    if not all(f.holds(allv[f.unknown], 2.0 ** -20) for f in data.filters):
        return False
    pts = list(allv.values()) + [complex(t.z) for t in data.triples
                                 if not isinstance(t.z, Unknown) and t.z is not INF]
    return not any(abs(p - q) < sep for i, p in enumerate(pts) for q in pts[:i])


def _key(xs, digits: int = 6):
    return tuple((round(x.real, digits), round(x.imag, digits)) for x in xs)


def solve_two(data: HurwitzData, prec: int, previous: Optional[dict] = None,
              seeds: Optional[Sequence[dict]] = None) -> list[HurwitzSolution]:
    red = reduce_fixed_block(data, max_free=2)
    frees = red.frees
    sysm = _System(data, red, frees)
    K = np.array([[float(x) for x in v] for v in red.kernel]).T
    seed_list = ([[complex(s[n]) for n in frees] for s in seeds] if seeds
                 else _default_seeds(data, frees))
    found = {}
    for r in _np_newton(_Batch(sysm, K), np.array(seed_list, dtype=complex)):
        xs, c, j = r
        key = _key(xs)
        if key not in found:
            found[key] = r
    ctx = context(prec)
    sols = []
    for key in sorted(found):
        xs, c, j = found[key]
        if not _admissible(data, dict(zip(frees, xs)), 1e-6):
            continue
        mx, mc, ok = _mp_newton(sysm, ctx, xs, c, j)
        if not ok or not _admissible(data, dict(zip(frees, mx)), 1e-6):
            continue
        mx2, _, ok2 = _mp_newton(sysm, context(2 * prec), mx, mc, j)
        vals = {}
        for name, v in zip(frees, mx):
            vals[name] = ctx.mpf(v.real) if abs(v.imag) <= ctx.mpf(2) ** (-(prec // 2)) else v
        f, resid, ratio, triples = numeric_map(data, red, vals, prec)
        vals2 = {name: v for name, v in zip(frees, mx2)}
        f2, _, _, _ = numeric_map(data, red, vals2, 2 * prec)
        certified = ok2 and _maps_agree(f, f2, prec)
        tolv = ctx.mpf(2) ** (-(prec // 2))
        report = verify_critical_data(f, triples, tol=tolv)
        stored = {k: (v if is_exact(v) else BigComplex(ctx.mpc(v), prec))
                  for k, v in data.instantiate_values(vals).items()}
        dim = 1 if ratio > ctx.mpf(2) ** (-(prec // 4)) else 2
        sols.append(HurwitzSolution(stored, None, f, admissible=True, kernel_dim=dim, residual=resid,
                                    verified=report.ok, certified=certified, prec=prec, data=triples))
    _order(sols, frees[0], previous)
    if not sols:
        return [HurwitzSolution({}, None, None, admissible=False, prec=prec)]
    return sols
