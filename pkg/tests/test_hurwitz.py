from fractions import Fraction

import mpmath
import pytest
import sympy

from belyi.critical_map import INF, CriticalTriple, verify_critical_data
from belyi.families import FamilyIndex, critical_data
from belyi.hurwitz import (Filter, HurwitzData, Tie, Unknown, data_from_json, minor_polynomials,
                           resultant_polynomial, solve, validate)
from belyi.poly import Poly, gcd_many
from belyi.reference import HARMONIC_MAPS, RESULTANTS
from belyi.roots import rational_roots

F = Fraction


def test_validate_two_values():
    d = HurwitzData([CriticalTriple(F(0), 1, F(0)), CriticalTriple(F(1), 1, F(1))])
    assert any(p.startswith("(i)") for p in validate(d))


def test_validate_odd():
    d = HurwitzData([CriticalTriple(F(0), 3, F(0))])
    assert any(p.startswith("(ii)") for p in validate(d))


def test_validate_half_bound():
    d = HurwitzData([CriticalTriple(F(0), 4, F(0)), CriticalTriple(F(1), 1, F(1)),
                     CriticalTriple(F(2), 1, F(2))])
    assert any(p.startswith("(iii)") for p in validate(d))


@pytest.mark.parametrize("n", range(11))
def test_validate_harmonic(n):
    for k in range(11):
        assert validate(critical_data(FamilyIndex.harmonic(n, k))) == []


def _oracle_minor_gcd_k0():
    """Symbolic maximal minors of the full 9 x 8 matrix for k = 0."""
    u = sympy.Symbol("u")
    n = 3
    pts = [("inf", 2, "inf"), (1 - u, 0, 1), (0, 1, 0), (u, 0, 0), (1, 1, 1)]
    rows = []
    for z, nu, b in pts:
        for l in range(nu + 1):
            if z == "inf":
                base = [sympy.factorial(l) if j == n - l else 0 for j in range(n + 1)]
            else:
                base = [sympy.ff(j, l) * sympy.sympify(z) ** (j - l) if j >= l else 0 for j in range(n + 1)]
            if b == "inf":
                rows.append([0] * (n + 1) + [-x for x in base])
            else:
                rows.append(base + [-b * x for x in base])
    M = sympy.Matrix(rows)
    minors = [sympy.expand(M.extract([i for i in range(9) if i != d], list(range(8))).det()) for d in range(9)]
    g = minors[0]
    for m in minors[1:]:
        g = sympy.gcd(g, m)
    return sympy.Poly(g, u)


def test_minor_gcd_k0_divisible_by_p0():
    data = critical_data(FamilyIndex.tritronquee(0, 0, 0))
    g = gcd_many(minor_polynomials(data))
    assert g.exact_div(Poly(RESULTANTS[0]).monic()) is not None
    assert F(3, 2) in rational_roots(g)
    # independently: symbolic minors of the unreduced matrix
    oracle = _oracle_minor_gcd_k0()
    assert sympy.rem(oracle, sympy.Poly(2 * sympy.Symbol("u") - 3, sympy.Symbol("u"))).is_zero


def test_minor_gcd_k1_divisible_by_p1():
    data = critical_data(FamilyIndex.tritronquee(0, 0, 1))
    g = gcd_many(minor_polynomials(data))
    assert g(F(7, 4)) == 0


def test_minor_interpolation_checked_at_fresh_nodes():
    # minor_polynomials re-evaluates determinants at three extra nodes and raises on mismatch
    data = critical_data(FamilyIndex.tritronquee(0, 0, 2, "published"))
    polys = minor_polynomials(data, check_nodes=3)
    assert polys and all(p.is_exact() for p in polys)


def test_minor_polynomials_need_one_unknown():
    data = critical_data(FamilyIndex.tritronquee(1, 0, 0))
    with pytest.raises(ValueError):
        minor_polynomials(data)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_resultant_reproduces_published(k):
    res, _ = resultant_polynomial(critical_data(FamilyIndex.tritronquee(0, 0, k, "published")))
    p = Poly(RESULTANTS[k])
    assert res == p or res == -p


def test_solve_k2():
    sols = solve(critical_data(FamilyIndex.tritronquee(0, 0, 2, "published")))
    res = sols[0].resultant
    assert res == Poly(RESULTANTS[2]) or res == -Poly(RESULTANTS[2])
    assert len(sols) == 1 and sols[0].admissible and sols[0].selected
    zm1 = complex(sols[0].assignments["zm1"].value)
    assert zm1.real > 1 and zm1.imag == 0


def test_solve_k0_exact():
    (s,) = solve(critical_data(FamilyIndex.tritronquee(0, 0, 0)))
    assert s.exact and s.assignments["zm1"] == F(3, 2) and s.assignments["z1"] == F(-1, 2)
    assert s.map.equivalent(__import__("belyi.families", fromlist=["x"]).base_cubic())


def test_solve_fixed_harmonic_11():
    (s,) = solve(critical_data(FamilyIndex.harmonic(1, 1)))
    p, q = HARMONIC_MAPS[(1, 1)]
    r = s.map.P.lc / p[-1]
    assert s.map.P == Poly(p) * r and s.map.Q == Poly(q) * r
    assert s.kernel_dim == 1 and s.verified


def test_no_admissible_solution_keeps_resultant():
    data = critical_data(FamilyIndex.tritronquee(0, 0, 1))
    data.filters.append(Filter("zm1", ">", F(100)))
    (s,) = solve(data)
    assert not s.admissible and s.map is None
    assert s.resultant == Poly(RESULTANTS[1]) or s.resultant == -Poly(RESULTANTS[1])


def test_solve_rejects_inadmissible():
    with pytest.raises(ValueError, match="inadmissible"):
        solve(HurwitzData([CriticalTriple(F(0), 3, F(0))]))


def _mp(v):
    return mpmath.mpmathify(v.value if hasattr(v, "value") else v)


def test_solutions_verify_and_filters_hold(tritronquee_published):
    for k, sols in tritronquee_published.items():
        for s in sols:
            assert s.admissible and s.kernel_dim == 1
            assert s.verified, k
            z1, zm1 = (_mp(s.assignments[x]) for x in ("z1", "zm1"))
            assert zm1.real > 1 and z1.real < 0
            assert abs(z1 + zm1 - 1) < 1e-30
            assert z1 not in (0, 1) and zm1 not in (0, 1) and z1 != zm1


def test_precision_doubling_stable():
    data = critical_data(FamilyIndex.tritronquee(0, 0, 3, "published"))
    a = solve(data, prec=256)[0].to_json()
    b = solve(data, prec=512)[0].to_json()
    digits = 30
    for name in ("z1", "zm1"):
        assert a["assignments"][name]["re"][:digits] == b["assignments"][name]["re"][:digits]


def test_two_unknowns_index_symmetry():
    out = {}
    for n, m in [(1, 0), (0, 1)]:
        for k in (0, 1):
            (s,) = solve(critical_data(FamilyIndex.tritronquee(n, m, k, "published")))
            assert s.admissible and s.kernel_dim == 1 and s.verified and s.certified
            out[(n, m, k)] = {x: v.value for x, v in s.assignments.items()}
    for k in (0, 1):
        assert abs(out[(1, 0, k)]["z1"] - (1 - out[(0, 1, k)]["zm1"])) < 1e-40
        assert abs(out[(0, 1, k)]["z1"] - (1 - out[(1, 0, k)]["zm1"])) < 1e-40
        for v in out[(1, 0, k)].values():
            assert v.imag == 0


def test_data_json_round_trip():
    data = critical_data(FamilyIndex.tritronquee(0, 0, 2, "published"))
    back = data_from_json(data.to_json())
    assert back.to_json() == data.to_json()
    assert back.triples == data.triples
