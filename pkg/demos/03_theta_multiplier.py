"""
The multiplier Theta = sum_j phi_j P_j
======================================

Inner functions in z1 are paired with a family of orthogonal projections on
the trailing variables.  Theta acts on the tensor product as a sum of
Kronecker products and is an isometry away from the caps.
"""

from hardylab import (
    DECREASING,
    BoxTruncation,
    InnerFunction1D,
    InnerSeq,
    ThetaMultiplier,
    build_theta,
    check_isometry,
    family_from_partition,
    range_subspace,
)

# decreasing terms z1^2, z1 with P1 the constants and P2 the rest
tail = BoxTruncation((5,))
family = family_from_partition(tail, [[(0,)], [(d,) for d in range(1, 6)]])
seq = InnerSeq(DECREASING, (InnerFunction1D.monomial(2), InnerFunction1D.monomial(1)))
op = build_theta(ThetaMultiplier(seq, family), 5)
print("space", op.space.caps, "margins", op.margins)
print("isometry residual", check_isometry(op).residual)
S = range_subspace(op)
print("rank of the range", S.rank)

# %%
# A Blaschke term is never exactly polynomial.  The isometry residual then
# tracks the discarded tail energy rather than rounding error.

half = InnerFunction1D(1.0, (0.5,))
one = family_from_partition(BoxTruncation((1,)), [[(0,), (1,)]])
op = build_theta(ThetaMultiplier(InnerSeq(DECREASING, (half,)), one), 12, 10)
res = check_isometry(op).residual
print(f"residual {res:.4e}, closed-form tail {(1 - 0.25) * 0.5**20:.4e}")
