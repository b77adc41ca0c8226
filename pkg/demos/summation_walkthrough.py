"""Unfold the summation rule for one goal and watch the ladder get used.

    python demos/summation_walkthrough.py [N]
"""

import sys

from rrunfold import Engine, format_rule, parse_goal, run_original
from rrunfold.programs import EXAMPLES

n = int(sys.argv[1]) if len(sys.argv) > 1 else 100
ex = EXAMPLES["summation"]
engine = Engine()
reg = engine.register(ex.program.predicate, ex.program, ex.scheme)

goal, _ = parse_goal(f"sum({n},S)")
answer = engine.call(goal)
print(f"sum({n},S) gives S = {answer['S']}")
print(f"recursion depth {n - 1} = {bin(n - 1)}; rules applied, most unfolded first:",
      answer.stats.applied_rule_indices)
print()
print("ladder kept in the cache:")
for r in reg.cache:
    print("  ", format_rule(r))

base = run_original(goal, ex.program)
print()
print(f"original program: {base.stats.rule_applications} rule applications, "
      f"unfolded: {answer.stats.rule_applications}")
