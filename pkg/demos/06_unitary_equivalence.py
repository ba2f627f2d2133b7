"""
Unitary equivalence of Rudin-type subspaces
===========================================

If S = eta S~ for an inner eta(z1), multiplication by eta intertwines the
compressed shifts.  A search over monomials z1^m finds the witness when one
exists; failure only says no monomial works.
"""

from hardylab import (
    DECREASING,
    INCREASING,
    BoxTruncation,
    InnerFunction1D,
    InnerFunctionProd,
    InnerSeq,
    RudinSpec,
    Thm41Spec,
    check_thm41,
)


def dec(*d):
    return InnerSeq(DECREASING, tuple(InnerFunction1D.monomial(x) for x in d))


def inc(*e):
    return InnerSeq(INCREASING, tuple(InnerFunctionProd.monomial(x) for x in e))


base = RudinSpec(dec(2, 1), inc((0,), (1,)))
space = BoxTruncation((8, 5))

shifted = RudinSpec(dec(4, 3), base.second)
v = check_thm41(Thm41Spec(shifted, base, max_m=3), space)
print(v.labels["eta"], v.labels["direction"], v.conditions)
print({k: x for k, x in v.residuals.items() if k.startswith("intertwine")})

other = RudinSpec(base.first, inc((0,), (2,)))
v = check_thm41(Thm41Spec(base, other, max_m=3), space)
print(v.labels["equivalence"])
