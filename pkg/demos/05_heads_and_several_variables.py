"""
Increasing terms and multi-variable leading factors
===================================================

With increasing terms the same story holds with heads Ran(P_1 + ... + P_j)
in place of tails.  The leading factors may also depend on the first k
variables instead of only z1.
"""

from hardylab import gallery, parse_scenario, run_check

for name, check in [("thm33-worked", "thm33"), ("thm33-single", "thm33"), ("thm33-escape", "thm33"),
                    ("remark-k2-single", "remark_k"), ("remark-k2-worked", "remark_k"),
                    ("remark-k2-escape", "remark_k")]:
    scn = parse_scenario(next(g for g in gallery() if g["name"] == name))
    v = run_check(scn, check)
    print(f"{name:18s} consistent={v.consistent}  {v.conditions}")
