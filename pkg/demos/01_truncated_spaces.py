"""
Truncated Hardy spaces and inner functions
==========================================

A box of degree caps stands in for the Hardy space of the polydisc.  Basis
monomials are ordered with the first variable running fastest, so a vector
splits into a tensor of one-variable blocks without copying.
"""

import numpy as np

from hardylab import BoxTruncation, HardyVector, InnerFunction1D, tensor_split

space = BoxTruncation((2, 1))
print("dimension", space.dim)
for pos, k in enumerate(space.exponents):
    print(pos, tuple(int(a) for a in k))

# the first-variable block is the fastest axis of the split
v = HardyVector(space, np.arange(space.dim, dtype=complex))
print(tensor_split(v))

# %%
# A Blaschke factor has an infinite Taylor series.  The tail bound tells us
# how far the series must be kept before truncation error drops below a
# target, and the multiplier is only trusted on indices that far from the cap.

b = InnerFunction1D(1.0, (0.5,))
print("coefficients", np.round(b.taylor_coeffs(6).real, 6))
for order in (5, 10, 20):
    print(f"tail past {order:2d}: {b.tail_bound(order):.3e}")
print("order for 1e-12:", b.truncation_order(1e-12))

# %%
# Divisibility among inner functions is divisibility of zero multisets.

big = InnerFunction1D(1.0, (0.5, 0.0, -0.3j))
small = InnerFunction1D(1.0, (0.0,))
print("small divides big:", small.divides(big) is not None)
print("big divides small:", big.divides(small) is not None)
