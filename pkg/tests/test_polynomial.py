import random
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, strategies as st

from belyi.poly import Poly, RationalMap, compose, derivative, gcd_squarefree, interpolate, reverse
from belyi.scalars import I, gauss
from belyi.families import FamilyIndex, airy_map, base_cubic, compose_airy

small = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 6))
coeffs = st.lists(small, min_size=0, max_size=11)
polys = coeffs.map(Poly)
nonzero = polys.filter(lambda p: not p.is_zero())


def test_no_trailing_zeros():
    assert Poly([1, 2, 0, 0]).coeffs == (1, 2)
    assert Poly([0, 0]).is_zero()


@given(nonzero, nonzero)
def test_degree_of_product(p, q):
    assert (p * q).degree == p.degree + q.degree


@given(polys, polys, small)
def test_evaluation_homomorphism(p, q, x):
    assert (p * q)(x) == p(x) * q(x)
    assert (p + q)(x) == p(x) + q(x)


def test_derivative_of_constant():
    assert derivative(Poly([5]), 1).is_zero()


def test_derivative_base_cubic():
    d = derivative(base_cubic().P, 1)
    assert d == Poly([0, 6, -6])
    assert d(0) == 0 and d(1) == 0


def test_derivative_finite_difference():
    rng = random.Random(7)
    p = Poly([Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(7)])
    dp = derivative(p, 1)
    ctx = mpmath.MPContext()
    ctx.prec = 256
    h = ctx.mpf(2) ** -80
    c = [ctx.mpf(x.numerator) / x.denominator for x in reversed(p.coeffs)]
    for j in range(10):
        x = ctx.mpf(j) / 3 - 1
        fd = (ctx.polyval(c, x + h) - ctx.polyval(c, x - h)) / (2 * h)
        exact = dp(Fraction(j, 3) - 1)
        assert abs(fd - ctx.mpf(exact.numerator) / exact.denominator) < ctx.mpf(2) ** -128


@given(nonzero, st.integers(0, 4))
def test_derivative_degree(p, l):
    d = derivative(p, l)
    assert d.is_zero() if p.degree < l else d.degree == p.degree - l


def test_reverse_examples():
    assert reverse(Poly([0, 0, 1]), 2) == Poly([1])
    assert reverse(Poly([1, 2]), 3) == Poly([0, 0, 2, 1])


def test_reverse_too_long():
    with pytest.raises(ValueError):
        reverse(Poly([1, 2, 3]), 1)


@given(polys)
def test_reverse_involution(p):
    n = max(p.degree, 0) + 2
    if p.is_zero() or p.coeffs[0] != 0:
        assert reverse(reverse(p, n), n) == p


def test_gcd_example():
    p = Poly.from_roots([1, 1, -2])
    g, sq = gcd_squarefree(p, Poly.from_roots([1]))
    assert g == Poly([-1, 1])
    assert sq == Poly.from_roots([1, -2]).monic()


def test_squarefree_part():
    p = Poly([1, 0, 1]) ** 3
    _, sq = gcd_squarefree(p, Poly([1]))
    assert sq == Poly([1, 0, 1])


@given(nonzero, nonzero)
def test_gcd_coprime_iff_resultant_nonzero(p, q):
    if p.degree < 1 or q.degree < 1:
        return
    g, _ = gcd_squarefree(p, q)
    z = sympy.Symbol("z")
    a = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)], z)
    b = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(q.coeffs)], z)
    assert (g.degree == 0) == (sympy.resultant(a, b) != 0)
    assert g.lc == 1


def test_gaussian_gcd():
    p = Poly.from_roots([I, 2])
    q = Poly.from_roots([I, -I])
    g, _ = gcd_squarefree(p, q)
    assert g == Poly([-I, 1])


def test_interpolate_examples():
    assert interpolate([(Fraction(0), Fraction(1)), (Fraction(1), Fraction(1))]) == Poly([1])
    assert interpolate([(Fraction(0), Fraction(-3)), (Fraction(1), Fraction(-1))]) == Poly([-3, 2])


def test_interpolate_repeated_node():
    with pytest.raises(ValueError):
        interpolate([(Fraction(0), Fraction(1)), (Fraction(0), Fraction(2))])


@given(st.lists(small, min_size=10, max_size=10))
def test_interpolate_round_trip(c):
    p = Poly(c)
    nodes = [Fraction(j) - 4 for j in range(10)]
    assert interpolate([(x, p(x)) for x in nodes]) == p


def test_compose_examples():
    f = RationalMap(Poly([0, 0, 1]), Poly([1]))
    g = RationalMap(Poly([1, 1]), Poly([1]))
    assert compose(f, g).equivalent(RationalMap(Poly([1, 2, 1]), Poly([1])))
    assert compose(base_cubic(), RationalMap.identity()).equivalent(base_cubic())


def test_compose_degenerate():
    with pytest.raises(ValueError, match="degenerate composition"):
        compose(RationalMap(Poly([3]), Poly([1])), base_cubic())


def test_compose_degree_airy():
    A1 = airy_map(1)
    assert A1.degree == 4
    assert compose_airy(1).degree == 12 == FamilyIndex.tritronquee(1, 1, 1).degree()


def _rmap(p, q):
    f = RationalMap(Poly(p), Poly(q))
    return f.reduce()


maps = st.tuples(st.lists(st.integers(-5, 5), min_size=1, max_size=5),
                 st.lists(st.integers(-5, 5), min_size=1, max_size=5)) \
    .filter(lambda t: any(t[1])) \
    .map(lambda t: _rmap(*t)) \
    .filter(lambda f: f.degree >= 1)


@given(maps)
def test_reduction_idempotent_and_value_preserving(f):
    g = f.reduce()
    assert g.reduce().P == g.P and g.reduce().Q == g.Q
    assert g.is_reduced()
    assert g.degree == max(g.P.degree, g.Q.degree)
    for j in range(20):
        x = Fraction(2 * j + 1, 7) - 3
        if f.Q(x) != 0 and g.Q(x) != 0:
            assert f(x) == g(x)


@given(maps, maps)
def test_compose_degree_multiplicative(f, g):
    h = compose(f, g)
    assert h.degree == f.degree * g.degree
    for j in range(5):
        x = Fraction(3 * j + 1, 11)
        if g.Q(x) != 0 and f.Q(g(x)) != 0 and h.Q(x) != 0:
            assert h(x) == f(g(x))


def test_poly_json_round_trip():
    p = Poly([Fraction(1, 2), gauss(0, 3), -1])
    assert Poly.from_json(p.to_json()) == p
