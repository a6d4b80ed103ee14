"""Arbitrary-precision complex numbers on private mpmath contexts.

Each numeric routine builds its own ``mpmath.MPContext`` so no global
precision state is shared between callers.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .scalars import GaussRat

_mpc = mpmath.ctx_mp_python._mpc
_mpf = mpmath.ctx_mp_python._mpf

MIN_PREC = 64
DEFAULT_PREC = 256


def context(prec: int) -> mpmath.ctx_mp.MPContext:
    if prec < MIN_PREC:
        raise ValueError(f"precision must be at least {MIN_PREC} bits")
    ctx = mpmath.MPContext()
    ctx.prec = prec
    return ctx


def to_ctx(ctx, x):
    """Convert an exact or mpmath scalar into ``ctx`` (real stays real)."""
    if isinstance(x, GaussRat):
        return ctx.mpc(_frac(ctx, x.re), _frac(ctx, x.im))
    if isinstance(x, Fraction):
        return _frac(ctx, x)
    if isinstance(x, int):
        return ctx.mpf(x)
    if isinstance(x, BigComplex):
        return ctx.mpc(x.value)
    if isinstance(x, (_mpc, complex)):
        return ctx.mpc(x)
    return ctx.mpf(x)


def _frac(ctx, q: Fraction):
    return ctx.mpf(q.numerator) / q.denominator


def digits_for(prec: int) -> int:
    """Decimal digits carried by ``prec`` bits."""
    return max(1, int(prec * 0.30102999566398))


@dataclass(frozen=True)
class BigComplex:
    """Complex value with an attached working precision in bits."""

    value: _mpc
    prec: int

    def __post_init__(self):
        if self.prec < MIN_PREC:
            raise ValueError(f"precision must be at least {MIN_PREC} bits")

    @classmethod
    def of(cls, x, prec: int) -> "BigComplex":
        ctx = context(prec)
        return cls(ctx.mpc(to_ctx(ctx, x)), prec)

    @property
    def re(self):
        return self.value.real

    @property
    def im(self):
        return self.value.imag

    def _binary(self, other, op):
        if isinstance(other, BigComplex):
            prec = min(self.prec, other.prec)
            rhs = other.value
        else:
            prec = self.prec
            rhs = to_ctx(context(prec), other)
        ctx = context(prec)
        return BigComplex(ctx.mpc(op(ctx, ctx.mpc(self.value), rhs)), prec)

    def __add__(self, other):
        return self._binary(other, lambda c, a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda c, a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda c, a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, lambda c, a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, lambda c, a, b: a / b)

    def __neg__(self):
        return BigComplex(-self.value, self.prec)

    def __abs__(self):
        return abs(self.value)

    def __complex__(self):
        return complex(self.value)

    def to_json(self, digits: int | None = None) -> dict:
        if digits is None:
            digits = digits_for(self.prec)
        return {
            "re": mpmath.nstr(self.value.real, digits, strip_zeros=False),
            "im": mpmath.nstr(self.value.imag, digits, strip_zeros=False),
            "prec_bits": self.prec,
        }
