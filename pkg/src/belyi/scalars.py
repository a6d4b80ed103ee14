"""Exact scalars: rationals and Gaussian rationals.

Real values are plain ``fractions.Fraction`` objects.  Values with a nonzero
imaginary part are :class:`GaussRat`.  Every arithmetic result that turns out
real is collapsed back to a ``Fraction`` so that real pipelines never pay for
the complex wrapper.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Union

Exact = Union[Fraction, "GaussRat"]


class GaussRat:
    """A Gaussian rational ``re + im*i`` with ``im != 0``.

    Construct through :func:`gauss` which collapses real values.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: Fraction, im: Fraction):
        self.re = re
        self.im = im

    def __repr__(self) -> str:
        return f"GaussRat({self.re}, {self.im})"

    def __str__(self) -> str:
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    def __eq__(self, other) -> bool:
        if isinstance(other, GaussRat):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational)):
            return False
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return True

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, GaussRat):
            return gauss(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Rational)):
            return GaussRat(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussRat):
            return gauss(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Rational)):
            return GaussRat(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Rational)):
            return GaussRat(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussRat):
            return gauss(self.re * other.re - self.im * other.im,
                         self.re * other.im + self.im * other.re)
        if isinstance(other, (int, Rational)):
            if other == 0:
                return Fraction(0)
            return GaussRat(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self):
        d = self.re * self.re + self.im * self.im
        return GaussRat(self.re / d, -self.im / d)

    def __truediv__(self, other):
        if isinstance(other, GaussRat):
            return self * other.inverse()
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return GaussRat(self.re / other, self.im / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return (self.inverse()) ** (-e)
        result: Exact = Fraction(1)
        base: Exact = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conjugate(self):
        return GaussRat(self.re, -self.im)

    @property
    def real(self) -> Fraction:
        return self.re

    @property
    def imag(self) -> Fraction:
        return self.im


def gauss(re, im=0) -> Exact:
    """Build an exact scalar, collapsing to ``Fraction`` when ``im == 0``."""
    re = Fraction(re)
    im = Fraction(im)
    if im == 0:
        return re
    return GaussRat(re, im)


I = GaussRat(Fraction(0), Fraction(1))


def exact(x) -> Exact:
    """Coerce ints, fractions, strings, JSON dicts and Gaussian rationals."""
    if isinstance(x, GaussRat):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, dict):
        return gauss(Fraction(x["re"]), Fraction(x["im"]))
    if isinstance(x, complex):
        return gauss(Fraction(x.real), Fraction(x.imag))
    raise TypeError(f"cannot make an exact scalar from {type(x).__name__}")


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, GaussRat)) and not isinstance(x, bool)


def re_part(x) -> Fraction:
    return x.re if isinstance(x, GaussRat) else Fraction(x)


def im_part(x) -> Fraction:
    return x.im if isinstance(x, GaussRat) else Fraction(0)


def conj(x):
    if isinstance(x, GaussRat):
        return x.conjugate()
    if isinstance(x, (int, Fraction)):
        return x
    return x.conjugate()


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def scalar_to_json(x):
    """``"num/den"`` for rationals, ``{"re": ..., "im": ...}`` otherwise."""
    if isinstance(x, GaussRat):
        return {"re": _frac_str(x.re), "im": _frac_str(x.im)}
    return _frac_str(Fraction(x))


def scalar_from_json(obj) -> Exact:
    return exact(obj)
