"""
Invariant subspaces, double commutativity and wandering vectors
===============================================================

Subspaces are carried as orthonormal frames.  Invariance under the shifts
and double commutativity of the compressed shifts are measured only on an
interior mask, away from the caps where truncation cuts the shifts off.
"""

import numpy as np

from hardylab import (
    BoxTruncation,
    InnerFunction1D,
    InnerFunctionProd,
    Subspace,
    interior_mask,
    is_doubly_commuting,
    is_invariant,
    principal_subspace,
    wandering_generator,
)

space = BoxTruncation((6, 6))
mask = interior_mask(space, 1)
print(mask.describe())

# %%
# A principal subspace phi H2 for a product inner function is invariant and
# doubly commuting, and its wandering space is the line through phi.

phi = InnerFunctionProd.monomial((2, 1))
S = principal_subspace(phi, space)
print("rank", S.rank)
print("invariant residual", is_invariant(S, mask=mask).max_residual)
print("doubly commuting residual", is_doubly_commuting(S, mask=mask).max_residual)
w = wandering_generator(S)
print("wandering", w.kind, "at", space.exponents[np.argmax(np.abs(w.generator.coeffs))])

# %%
# z1 H2 + z2 H2 is invariant but not principal.  The wandering space has
# rank two and the compressed shifts fail to doubly commute.

punctured = Subspace.coordinate(space, [k for k in map(tuple, space.exponents) if k != (0, 0)])
print("invariant residual", is_invariant(punctured, mask=mask).max_residual)
print("wandering rank", wandering_generator(punctured).rank)
print("doubly commuting residual", is_doubly_commuting(punctured, mask=mask).max_residual)

# %%
# With a Blaschke factor the generator is recovered up to a unimodular phase.

f = InnerFunctionProd((InnerFunction1D(1.0, (0.3,)), InnerFunction1D.monomial(1)))
w = wandering_generator(principal_subspace(f, BoxTruncation((30, 2)), order=20))
expect = np.kron(f.factors[1].taylor_coeffs(2), f.factors[0].taylor_coeffs(30))
print("overlap with phi", abs(np.vdot(expect / np.linalg.norm(expect), w.generator.coeffs)))
