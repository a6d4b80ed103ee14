import json
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, strategies as st

from belyi.families import base_cubic
from belyi.numeric import context
from belyi.poles import (SchwarzianRational, normalize_cubic, pole_sequence, richardson3, schwarzian,
                         schwarzian_at, select_lambda)
from belyi.poly import Poly, RationalMap

F = Fraction
small = st.builds(F, st.integers(-30, 30), st.integers(1, 7))


def _cubic_S(a0, b0):
    # -2 (4 z^3 - 2 a0 z - 28 b0)
    num = Poly([56 * b0, 4 * a0, 0, -8])
    return SchwarzianRational(num, Poly([1]), Poly([1]))


def test_mobius_schwarzian_vanishes():
    f = RationalMap(Poly([3, 2]), Poly([-1, 5]))
    assert schwarzian(f).is_zero()


def test_base_cubic_schwarzian_against_symbolic_oracle():
    S = schwarzian(base_cubic())
    assert S.den.monic() == Poly.from_roots([0, 0, 1, 1])
    z = sympy.Symbol("z")
    f = -2 * z ** 3 + 3 * z ** 2
    oracle = sympy.cancel(sympy.diff(f, z, 3) / sympy.diff(f, z)
                          - sympy.Rational(3, 2) * (sympy.diff(f, z, 2) / sympy.diff(f, z)) ** 2)
    for x in (F(1, 3), F(-2), F(5, 7)):
        assert S(x) == F(str(oracle.subs(z, sympy.Rational(x.numerator, x.denominator))))


def test_schwarzian_constant_map():
    with pytest.raises(ValueError):
        schwarzian(RationalMap(Poly([2]), Poly([1])))


@given(small.filter(lambda x: x != 0), small)
def test_affine_cocycle(lam, c):
    f = RationalMap(Poly([1, -3, -3, 2, 3, -3, -1]), Poly([-1, -3, 3, 2, -3, -3, 1]))
    S = schwarzian(f)
    g = f.precompose_affine(lam, c)
    Sg = schwarzian(g)
    for x in (F(1, 5), F(-3, 4), F(2)):
        y = lam * x + c
        if S.den(y) != 0 and Sg.den(x) != 0:
            assert Sg(x) == lam ** 2 * S(y)


def test_schwarzian_at_matches_rational_form():
    S = schwarzian(base_cubic())
    assert schwarzian_at(base_cubic(), F(2, 3)) == S(F(2, 3))


@given(small, small)
def test_normalize_exact_cubic_round_trip(a0, b0):
    pot = normalize_cubic(_cubic_S(a0, b0), 128)
    ctx = context(128)
    assert pot.zstar == 0 and pot.lam == 1
    assert abs(pot.a - ctx.mpf(a0.numerator) / a0.denominator) < ctx.mpf(2) ** -100
    assert abs(pot.b - ctx.mpf(b0.numerator) / b0.denominator) < ctx.mpf(2) ** -100


def test_normalize_degenerate_third_derivative():
    S = SchwarzianRational(Poly([0, 0, 0, 0, 1]), Poly([1]), Poly([1]))
    with pytest.raises(ValueError, match="degenerate third derivative"):
        normalize_cubic(S, 64)


def test_normalize_without_second_derivative_zero():
    S = SchwarzianRational(Poly([0, 0, 1]), Poly([1]), Poly([1]))
    with pytest.raises(ValueError, match="no zero"):
        normalize_cubic(S, 64)


def test_select_lambda_real_branch():
    ctx = context(128)
    lam = select_lambda(ctx, ctx.mpf(-32))
    assert lam == -2


def test_select_lambda_seed_and_continuation():
    ctx = context(128)
    rhs = ctx.mpc(0, 1)
    lam = select_lambda(ctx, rhs)
    assert -ctx.pi / 5 < ctx.arg(lam) <= ctx.pi / 5
    assert abs(lam ** 5 - rhs) < ctx.mpf(2) ** -100
    prev = ctx.expj(2 * ctx.pi / 5)
    cont = select_lambda(ctx, rhs, previous=prev)
    roots = [abs(ctx.arg(cont / prev))]
    assert roots[0] < ctx.pi / 5


def test_richardson_exact_on_model():
    vals = [3 + F(2, k) - F(5, k * k) for k in (3, 4, 5)]
    assert abs(richardson3([3, 4, 5], vals) - 3) < mpmath.mpf(10) ** -60


@pytest.fixture(scope="module")
def short_sequence():
    return pole_sequence(0, 0, [0, 1, 2], prec=256)


def test_small_k_pre_asymptotic(short_sequence):
    e0 = short_sequence.estimates[0]
    assert e0.k == 0 and e0.status == "ok" and e0.pre_asymptotic
    assert e0.potential is not None


def test_precision_doubling_certifies(short_sequence):
    assert all(e.certified for e in short_sequence.estimates)


def test_pole_json_fields(short_sequence):
    j = short_sequence.to_json()
    e = j["estimates"][1]
    for key in ("n", "m", "k", "a", "b", "zstar", "lambda", "prec_bits", "diffs"):
        assert key in e
    assert set(e["a"]) == {"re", "im"}
    json.dumps(j)


def test_unequal_indices_give_complex_a():
    seq = pole_sequence(1, 0, [0, 1], prec=256)
    for e in seq.estimates:
        assert e.status == "ok"
        assert abs(e.potential.a.imag) > 1e-6


def test_equal_indices_third_derivative_real(short_sequence):
    # for n = m the selected lambda should be the real fifth root and a real
    for e in short_sequence.estimates:
        p = e.potential
        assert abs(mpmath.mpc(p.lam).imag) == 0
        assert abs(mpmath.mpc(p.a).imag) <= 2.0 ** -128 * max(1, abs(p.a))


def test_failure_is_reported_per_k():
    seq = pole_sequence(0, 0, [0, 1], prec=128, certify=False)
    assert [e.k for e in seq.estimates] == [0, 1]
