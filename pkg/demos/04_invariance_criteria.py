"""
When is the range of Theta invariant?
=====================================

For decreasing terms, the range is invariant exactly when every tail
S_j = Ran(P_j + ... + P_J) is invariant.  A second group of conditions,
which must share one truth value, decides when the range is of Rudin type:
the tails are principal, the compressed shifts doubly commute, and two
operator identities in the family hold.
"""

from hardylab import gallery, parse_scenario, run_check


def show(name, check):
    scn = parse_scenario(next(g for g in gallery() if g["name"] == name))
    v = run_check(scn, check)
    print(f"{name:24s} {check:7s} {v.conditions}")
    return v


show("thm32-worked", "thm32a")
show("thm32-escape", "thm32a")

# %%
# Three variables.  A chain of monomials gives principal tails, and all four
# conditions hold.  Replacing a tail by an invariant but non-principal space
# flips them together.

v = show("thm32b-n3-chain", "thm32b")
print("recovered trailing sequence", v.labels.get("i:trailing"))
show("thm32b-n3-adversarial", "thm32b")

# %%
# The two projection-family identities can be phrased with tails or with
# the members themselves; the suprema agree.

show("lemma31-chain-z1z2", "lemma31")
show("lemma31-nonprincipal", "lemma31")
