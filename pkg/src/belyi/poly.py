"""Dense univariate polynomials and rational maps.

Coefficients are exact scalars (``Fraction`` / ``GaussRat``) in the exact
pipeline, or mpmath numbers in the numeric one.  The class does not care
which, as long as ``+``, ``*`` and ``==`` behave; division-based operations
(``divmod``, ``gcd``) require a field.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd as igcd
from typing import Iterable, Sequence

from sympy.polys.domains import ZZ
from sympy.polys.euclidtools import dup_gcd

from .scalars import GaussRat, conj, exact, is_exact, scalar_from_json, scalar_to_json

_ZERO = Fraction(0)
_ONE = Fraction(1)


class Poly:
    """Polynomial with ``coeffs[i]`` the coefficient of ``z**i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [Fraction(x) if isinstance(x, int) and not isinstance(x, bool) else x for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, d: int, c=_ONE) -> "Poly":
        return cls([_ZERO] * d + [c])

    @classmethod
    def z(cls) -> "Poly":
        return cls([_ZERO, _ONE])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Poly":
        p = cls([_ONE])
        for r in roots:
            p = p * cls([-r, _ONE])
        return p

    # basic accessors

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else _ZERO

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else _ZERO

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, GaussRat)):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({list(self.coeffs)!r})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(f"({c})" + ("" if i == 0 else "*z" if i == 1 else f"*z^{i}"))
        return " + ".join(terms)

    # ring operations

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __add__(self, other) -> "Poly":
        other = _as_poly(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([a[i] + b[i] if i < len(b) else a[i] for i in range(len(a))])

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "Poly":
        return _as_poly(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            if other == 0:
                return Poly()
            return Poly([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative power")
        result = Poly([_ONE])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale(self, c) -> "Poly":
        return self * c

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        quo = [_ZERO] * (dq + 1)
        inv_lc = _ONE / other.lc if is_exact(other.lc) else 1 / other.lc
        d = other.degree
        for i in range(dq, -1, -1):
            c = rem[i + d] * inv_lc
            quo[i] = c
            if c != 0:
                for j, oc in enumerate(other.coeffs):
                    rem[i + j] = rem[i + j] - c * oc
        return Poly(quo), Poly(rem[:d])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    # evaluation and calculus

    def __call__(self, x):
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self, order: int = 1) -> "Poly":
        if order < 0:
            raise ValueError("derivative order must be non-negative")
        c = list(self.coeffs)
        for _ in range(order):
            c = [i * c[i] for i in range(1, len(c))]
        return Poly(c)

    def reverse(self, n: int) -> "Poly":
        """``z**n * p(1/z)``; requires ``deg p <= n``."""
        if self.degree > n:
            raise ValueError(f"degree {self.degree} exceeds reversal bound {n}")
        c = list(self.coeffs) + [_ZERO] * (n + 1 - len(self.coeffs))
        return Poly(reversed(c))

    def compose(self, g: "Poly") -> "Poly":
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * g + Poly([c])
        return acc

    def shift(self, c) -> "Poly":
        """``p(z + c)``."""
        return self.compose(Poly([c, _ONE]))

    def taylor(self, x, order: int) -> list:
        """Taylor coefficients ``p^(j)(x)/j!`` for ``j <= order`` (synthetic division)."""
        c = list(self.coeffs)
        out = []
        for _ in range(order + 1):
            if not c:
                out.append(_ZERO * x)
                continue
            acc = _ZERO
            quo = [_ZERO] * (len(c) - 1)
            for i in range(len(c) - 1, -1, -1):
                acc = acc * x + c[i]
                if i > 0:
                    quo[i - 1] = acc
            out.append(acc)
            c = quo
        return out

    def map_coeffs(self, fn) -> "Poly":
        return Poly([fn(c) for c in self.coeffs])

    def conjugate(self) -> "Poly":
        return Poly([conj(c) for c in self.coeffs])

    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.coeffs)

    def is_real(self) -> bool:
        return not any(isinstance(c, GaussRat) for c in self.coeffs)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lc = self.lc
        inv = _ONE / lc if is_exact(lc) else 1 / lc
        return Poly([c * inv for c in self.coeffs[:-1]] + [_ONE])

    def primitive(self) -> "Poly":
        """Integer primitive part with positive leading coefficient (rational input)."""
        if self.is_zero():
            return self
        if not self.is_real():
            raise ValueError("primitive part needs rational coefficients")
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // igcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = igcd(g, v)
        sign = -1 if ints[-1] < 0 else 1
        return Poly([Fraction(sign * v // g) for v in ints])

    def to_json(self) -> list:
        return [scalar_to_json(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> "Poly":
        return cls([scalar_from_json(x) for x in data])

    @classmethod
    def of(cls, coeffs: Iterable) -> "Poly":
        """Build from ints/strings/Gaussian rationals with exact coercion."""
        return cls([exact(c) for c in coeffs])


def _as_poly(x) -> Poly:
    return x if isinstance(x, Poly) else Poly([x])


def derivative(p: Poly, order: int = 1) -> Poly:
    return p.derivative(order)


def reverse(p: Poly, n: int) -> Poly:
    return p.reverse(n)


def gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd over the field of coefficients."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd of two zero polynomials")
    if p.is_real() and q.is_real() and p.is_exact() and q.is_exact():
        return _gcd_integer(p, q).monic()
    a, b = p, q
    while not b.is_zero():
        a, b = b, (a % b).monic()
    return a.monic()


def _gcd_integer(p: Poly, q: Poly) -> Poly:
    """gcd of rational polynomials through sympy's dense integer gcd."""
    if p.is_zero():
        return q.primitive()
    if q.is_zero():
        return p.primitive()
    a = [ZZ(int(c)) for c in reversed(p.primitive().coeffs)]
    b = [ZZ(int(c)) for c in reversed(q.primitive().coeffs)]
    g = dup_gcd(a, b, ZZ)
    return Poly([Fraction(int(c)) for c in reversed(g)])


def gcd_many(polys: Sequence[Poly]) -> Poly:
    """gcd of a list, via one random-combination gcd and a divisibility check."""
    nonzero = [p for p in polys if not p.is_zero()]
    if not nonzero:
        raise ValueError("gcd of zero polynomials")
    if len(nonzero) == 1:
        return nonzero[0].monic()
    combo = Poly()
    for i, p in enumerate(nonzero[1:]):
        combo = combo + p * (2 * i + 3)
    g = gcd(nonzero[0], combo)
    if all((p % g).is_zero() for p in nonzero):
        return g
    g = nonzero[0]
    for p in nonzero[1:]:
        g = gcd(g, p)
    return g


def squarefree_part(p: Poly) -> Poly:
    if p.degree < 1:
        return p.monic()
    return p.exact_div(gcd(p, p.derivative())).monic()


def gcd_squarefree(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    """Monic gcd of ``p`` and ``q`` together with the squarefree part of ``p``."""
    g = gcd(p, q)
    sq = squarefree_part(p) if not p.is_zero() else Poly()
    return g, sq


def interpolate(samples: Sequence[tuple]) -> Poly:
    """Newton divided differences through ``(node, value)`` pairs, exact."""
    xs = [x for x, _ in samples]
    if len(set(xs)) != len(xs):
        raise ValueError("repeated interpolation node")
    c = [Fraction(y) if isinstance(y, int) else y for _, y in samples]
    n = len(xs)
    if n == 0:
        return Poly()
    top = n
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            c[i] = (c[i] - c[i - 1]) / (xs[i] - xs[i - j])
        if all(x == 0 for x in c[j:]):
            # all differences of order j vanish: degree is below j
            top = j
            break
    acc = Poly([c[top - 1]])
    for i in range(top - 2, -1, -1):
        acc = acc * Poly([-xs[i], _ONE]) + Poly([c[i]])
    return acc


class RationalMap:
    """``f = P/Q`` with ``P``, ``Q`` polynomials."""

    __slots__ = ("P", "Q")

    def __init__(self, P: Poly, Q: Poly):
        if Q.is_zero():
            raise ZeroDivisionError("denominator is the zero polynomial")
        self.P = P
        self.Q = Q

    @classmethod
    def of(cls, p: Iterable, q: Iterable) -> "RationalMap":
        return cls(Poly.of(p), Poly.of(q))

    @classmethod
    def identity(cls) -> "RationalMap":
        return cls(Poly.z(), Poly([_ONE]))

    @property
    def degree(self) -> int:
        return max(self.P.degree, self.Q.degree)

    def is_exact(self) -> bool:
        return self.P.is_exact() and self.Q.is_exact()

    def __call__(self, x):
        return self.P(x) / self.Q(x)

    def __repr__(self) -> str:
        return f"RationalMap({self.P!r}, {self.Q!r})"

    def reduce(self) -> "RationalMap":
        """Cancel the common factor and scale so that ``Q`` is monic."""
        if not self.is_exact():
            return self
        if self.P.is_zero():
            return RationalMap(Poly(), Poly([_ONE]))
        g = gcd(self.P, self.Q)
        P, Q = self.P, self.Q
        if g.degree > 0:
            P, Q = P.exact_div(g), Q.exact_div(g)
        inv = _ONE / Q.lc
        return RationalMap(P * inv, Q * inv)

    def is_reduced(self) -> bool:
        if not self.is_exact():
            return True
        return gcd(self.P, self.Q).degree == 0

    def equivalent(self, other: "RationalMap") -> bool:
        """Same function: ``P1*Q2 == P2*Q1`` exactly."""
        return (self.P * other.Q - other.P * self.Q).is_zero()

    def compose(self, g: "RationalMap") -> "RationalMap":
        """``self(g(z))``, reduced."""
        return compose(self, g)

    def derivative_numerator(self) -> Poly:
        """``P'Q - PQ'``, the numerator of ``f'``."""
        return self.P.derivative() * self.Q - self.P * self.Q.derivative()

    def conjugate(self) -> "RationalMap":
        return RationalMap(self.P.conjugate(), self.Q.conjugate())

    def precompose_affine(self, a, b) -> "RationalMap":
        """``f(a*z + b)``."""
        g = Poly([b, a])
        return RationalMap(self.P.compose(g), self.Q.compose(g))

    def to_json(self) -> dict:
        return {"P": self.P.to_json(), "Q": self.Q.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "RationalMap":
        return cls(Poly.from_json(data["P"]), Poly.from_json(data["Q"]))


def compose(f: RationalMap, g: RationalMap) -> RationalMap:
    """Reduced ``f o g``; degree is multiplicative."""
    if f.degree < 1 or g.degree < 1:
        raise ValueError("degenerate composition")
    f = f.reduce()
    g = g.reduce()
    d = f.degree
    G, H = g.P, g.Q
    hp = [Poly([_ONE])]
    gp = [Poly([_ONE])]
    for _ in range(d):
        hp.append(hp[-1] * H)
        gp.append(gp[-1] * G)

    def homog(p: Poly) -> Poly:
        acc = Poly()
        for i, c in enumerate(p.coeffs):
            if c != 0:
                acc = acc + gp[i] * hp[d - i] * c
        return acc

    return RationalMap(homog(f.P), homog(f.Q)).reduce()


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: monic coprime squarefree factors with multiplicities."""
    if p.degree < 1:
        return []
    a = gcd(p, p.derivative())
    b = p.exact_div(a)
    c = p.derivative().exact_div(a)
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        g = gcd(b, d) if not d.is_zero() else b.monic()
        if g.degree > 0:
            out.append((g, i))
        b = b.exact_div(g)
        c = d.exact_div(g)
        d = c - b.derivative()
        i += 1
    return out
