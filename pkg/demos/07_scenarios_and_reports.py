"""
Scenario files, generators and reports
======================================

Everything above can be driven from JSON.  Generators are seeded, reports
are written with sorted keys, and the exit code says whether the verdicts
were consistent.  The same actions are available as ``hardylab run``,
``hardylab generate`` and ``hardylab gallery``.
"""

import collections

from hardylab import generate, run_data
from hardylab.harness import dumps

data = generate("positive-monomial", 3, (4, 3, 3), 2, seed=5)
print(dumps(data)[:400], "...")
result = run_data(data)
print("exit", result.exit_code, result.report["verdicts"]["thm32b"]["conditions"])

# %%
# A batch of mixed scenarios; every one should come back consistent.

tally = collections.Counter()
for seed in range(30):
    for kind in ("positive-monomial", "adversarial", "adversarial-escape"):
        r = run_data(generate(kind, 3, (4, 4, 4), 3, seed))
        tally[(kind, r.exit_code)] += 1
for key, count in sorted(tally.items()):
    print(key, count)
