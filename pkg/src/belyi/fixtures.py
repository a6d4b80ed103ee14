"""Reproduction fixtures shared by ``belyi verify`` and the acceptance tests."""
from __future__ import annotations

from fractions import Fraction

from . import reference
from .families import FamilyIndex, composition_check, critical_data, kernel_map
from .hurwitz import resultant_polynomial
from .poly import Poly, RationalMap


def same_up_to_sign(p: Poly, coeffs) -> bool:
    q = Poly([Fraction(c) for c in coeffs])
    return p == q or p == -q


def check_resultant(k: int, variant: str = "published"):
    res, _ = resultant_polynomial(critical_data(FamilyIndex.tritronquee(0, 0, k, variant)))
    ok = same_up_to_sign(res, reference.RESULTANTS[k])
    return ok, [str(int(c)) for c in res.coeffs]


def check_harmonic(n: int, k: int):
    f = kernel_map(FamilyIndex.harmonic(n, k))
    P, Q = reference.HARMONIC_MAPS[(n, k)]
    g = RationalMap(Poly([Fraction(c) for c in P]), Poly([Fraction(c) for c in Q]))
    # equal up to a common scalar on (P, Q)
    r = f.P.lc / g.P.lc
    ok = f.P == g.P * r and f.Q == g.Q * r
    return ok, f"scalar {r}"


def _resultant_fixture(k):
    return lambda prec: check_resultant(k)


def _harmonic_fixture(n, k):
    return lambda prec: check_harmonic(n, k)


def _composition_fixture(n):
    def run(prec):
        r = composition_check(n)
        return r["equal"] and r["critical_data"], r
    return run


FIXTURES = (
    [(f"resultant_k{k}", k >= 4, _resultant_fixture(k)) for k in range(6)]
    + [(f"harmonic_n{n}_k{k}", False, _harmonic_fixture(n, k)) for n, k in reference.HARMONIC_MAPS]
    + [(f"composition_n{n}", n >= 2, _composition_fixture(n)) for n in range(4)]
)
