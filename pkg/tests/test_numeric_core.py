from fractions import Fraction

import mpmath
import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from belyi.numeric import BigComplex, context, to_ctx
from belyi.poly import Poly
from belyi.roots import complex_roots, isolate_real_roots, rational_roots, refine_root, bisect_step
from belyi.scalars import GaussRat, I, gauss, scalar_from_json, scalar_to_json

from belyi.reference import RESULTANTS

rationals = st.builds(Fraction, st.integers(-999, 999), st.integers(1, 50))
exacts = st.builds(gauss, rationals, rationals)


@given(exacts, exacts)
def test_field_axioms(x, y):
    assert (x + y) - y == x
    if x != 0:
        assert x * (1 / x) == 1


@given(exacts)
def test_scalar_normalized(x):
    for part in (x.re, x.im) if isinstance(x, GaussRat) else (x,):
        assert part.denominator > 0
        assert np.gcd(part.numerator, part.denominator) == 1


def test_real_results_collapse():
    assert isinstance(I * I, Fraction)
    assert I * I == -1
    assert isinstance(I + 1, GaussRat)


@given(exacts)
def test_scalar_json_round_trip(x):
    assert scalar_from_json(scalar_to_json(x)) == x


def test_bigcomplex_precision_floor():
    with pytest.raises(ValueError):
        BigComplex.of(1, 32)


def test_bigcomplex_min_precision():
    a = BigComplex.of(1, 128)
    b = BigComplex.of(2, 256)
    assert (a + b).prec == 128
    assert (b * a).prec == 128


def test_bigcomplex_json():
    d = BigComplex.of(Fraction(3, 2), 64).to_json()
    assert d["prec_bits"] == 64
    assert d["re"].startswith("1.5")


# real isolation


def test_isolate_p1():
    br = isolate_real_roots(Poly(RESULTANTS[1]))
    assert len(br) == 1
    assert br[0].contains(Fraction(7, 4))


def test_isolate_no_real_roots():
    assert isolate_real_roots(Poly([1, 0, 1])) == []


def test_isolate_p2_single_root_above_one():
    p = Poly(RESULTANTS[2])
    above = [b for b in isolate_real_roots(p) if b.lo >= 1]
    assert len(above) == 1
    # Sturm count on (1, oo) agrees
    z = sympy.Symbol("z")
    assert sympy.Poly(list(reversed(RESULTANTS[2])), z).count_roots(1, None) == 1


def test_isolate_zero_polynomial():
    with pytest.raises(ValueError, match="zero polynomial"):
        isolate_real_roots(Poly([]))


def test_isolate_multiplicity():
    p = Poly.from_roots([2, 2, 2, -1])
    br = isolate_real_roots(p)
    assert sorted((b.lo <= 2 <= b.hi, b.multiplicity) for b in br) == [(False, 1), (True, 3)]


def test_rational_roots():
    p = Poly([-3, 2]) * Poly([1, 0, 1]) * Poly([5, 1])
    assert rational_roots(p) == [Fraction(-5), Fraction(3, 2)]


def _sturm_count(coeffs):
    z = sympy.Symbol("z")
    return sympy.Poly(list(reversed(coeffs)), z).count_roots()


@given(st.lists(st.integers(-20, 20), min_size=2, max_size=13).filter(lambda c: c[-1] != 0))
def test_isolation_matches_sturm(c):
    p = Poly(c)
    brackets = isolate_real_roots(p)
    assert len(brackets) == len(set(sympy.Poly(list(reversed(c)), sympy.Symbol("z")).real_roots()))
    for a, b in zip(brackets, brackets[1:]):
        assert a.hi < b.lo


# refinement


def test_refine_p0():
    (b,) = isolate_real_roots(Poly(RESULTANTS[0]))
    assert refine_root(b, 128).value == mpmath.mpf(1.5)


def test_refine_linear():
    (b,) = isolate_real_roots(Poly([-1, 1]))
    assert refine_root(b, 128).value == 1


def test_refine_p4_fifty_digits():
    p = Poly(RESULTANTS[4])
    above = [b for b in isolate_real_roots(p) if b.lo >= 1]
    r1 = refine_root(above[0], 256).value
    r2 = refine_root(above[0], 512).value
    ctx = context(512)
    # independent oracle: plain bisection on the integer polynomial
    lo, hi = to_ctx(ctx, above[0].lo), to_ctx(ctx, above[0].hi)
    f = lambda x: ctx.polyval(list(reversed(RESULTANTS[4])), x)
    slo = f(lo) > 0
    for _ in range(400):
        mid = (lo + hi) / 2
        if (f(mid) > 0) == slo:
            lo = mid
        else:
            hi = mid
    assert mpmath.nstr(r1.real, 50) == mpmath.nstr(ctx.mpf(lo), 50)
    assert mpmath.nstr(r2.real, 50) == mpmath.nstr(r1.real, 50)


def test_refine_deterministic():
    (b,) = [x for x in isolate_real_roots(Poly(RESULTANTS[3])) if x.lo > 1]
    assert refine_root(b, 200).value == refine_root(b, 200).value


def test_bisect_halves_width():
    b = [x for x in isolate_real_roots(Poly(RESULTANTS[2])) if x.lo > 1][0]
    c = bisect_step(b)
    assert c.width == b.width / 2 or c.width == 0
    lo, hi = c.poly(c.lo), c.poly(c.hi)
    assert lo * hi < 0


def test_refine_invalid_bracket():
    from belyi.roots import RootBracket
    bad = RootBracket(Poly([-1, 1]), Fraction(2), Fraction(3), 1)
    with pytest.raises(ValueError):
        refine_root(bad, 64)


# complex roots


def _roots_sorted(rs):
    return sorted(((complex(r.value), m) for r, m in rs), key=lambda t: (round(t[0].real, 8), round(t[0].imag, 8)))


def test_complex_roots_i():
    rs = _roots_sorted(complex_roots(Poly([1, 0, 1]), 128))
    assert [m for _, m in rs] == [1, 1]
    assert abs(rs[0][0] + 1j) < 1e-30 and abs(rs[1][0] - 1j) < 1e-30


def test_complex_roots_triple():
    rs = complex_roots(Poly.from_roots([2, 2, 2]), 128)
    assert len(rs) == 1 and rs[0][1] == 3
    assert abs(complex(rs[0][0].value) - 2) < 1e-30


def test_complex_roots_zero_poly():
    with pytest.raises(ValueError):
        complex_roots(Poly([]), 64)


def test_complex_roots_match_companion_oracle():
    from belyi.families import base_cubic
    from belyi.poles import schwarzian
    num2 = schwarzian(base_cubic()).second_derivative_numerator()
    ours = sorted((complex(r.value) for r, m in complex_roots(num2, 128) for _ in range(m)), key=abs)
    oracle = sorted(np.roots([complex(c) for c in reversed(num2.coeffs)]), key=abs)
    assert len(ours) == num2.degree
    for a, b in zip(ours, oracle):
        assert abs(a - b) < 1e-8
    assert abs(abs(ours[0]) - abs(oracle[0])) < 1e-12


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=5).filter(lambda c: c[-1] != 0),
       st.lists(st.integers(-9, 9), min_size=2, max_size=5).filter(lambda c: c[-1] != 0))
def test_complex_roots_of_product(a, b):
    prec = 128
    p, q = Poly(a), Poly(b)
    tol = 2.0 ** (-prec / 2) * 1e6
    both = [complex(r.value) for r, m in complex_roots(p * q, prec) for _ in range(m)]
    sep = [complex(r.value) for f in (p, q) for r, m in complex_roots(f, prec) for _ in range(m)]
    assert len(both) == len(sep)
    for z in sep:
        # multiple roots only resolve to about prec / multiplicity bits
        assert min(abs(z - w) for w in both) < max(tol, 1e-6)


@given(st.lists(st.integers(-30, 30), min_size=2, max_size=9).filter(lambda c: c[-1] != 0))
def test_complex_roots_residual(c):
    prec = 128
    p = Poly(c)
    ctx = context(prec)
    norm = max(abs(x) for x in c)
    total = 0
    for r, m in complex_roots(p, prec):
        total += m
        val = ctx.polyval(list(reversed(c)), r.value)
        # the residual bound holds on the squarefree part
        if m == 1:
            assert abs(val) <= 2.0 ** (-prec / 2) * norm * (1 + abs(r.value)) ** p.degree
    assert total == p.degree
