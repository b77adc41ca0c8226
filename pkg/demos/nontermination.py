"""A recursion that never reaches its base case from p(0).

Both modes stop with an error instead of looping: the unfolder hits its
cap on generated rules and the original interpreter its step bound.
"""

from rrunfold import StepLimitExceeded, UnfoldCapExceeded, parse_goal, run_original, unfold_runtime
from rrunfold.programs import COUNTDOWN_SCHEME, countdown_program

p = countdown_program()
print(p)
goal, _ = parse_goal("p(0)")
try:
    unfold_runtime(goal, p, COUNTDOWN_SCHEME, cap=64)
except UnfoldCapExceeded as e:
    print("unfolded:", e)
try:
    run_original(goal, p, max_steps=10_000)
except StepLimitExceeded as e:
    print("original:", e)

