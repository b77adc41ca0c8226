"""Runtime repeated recursion unfolding for single-headed simplification rules.

A linear direct recursive rule is unfolded with itself again and again at
call time, each step simplified by a problem-specific scheme so that rule
r_i covers 2^i recursive steps.  A meta-interpreter then walks the ladder of
rules once, most unfolded first.
"""

from .engine import Engine, Registration
from .errors import *  # noqa: F401,F403
from .interp import recursion_depth, run_original
from .meta import count_applications, run_unfolded
from .parser import parse_goal, parse_program, parse_term
from .rules import Answer, Program, Rule, StepStats, format_program, format_rule, validate_program
from .schemes import (COUNTDOWN, REVERSAL, SORTING, SUMMATION, detect_scheme, step_countdown,
                      step_reversal, step_sorting, step_summation)
from .terms import (BindingStore, Var, VarGen, format_term, is_variant, make_list, rename_apart,
                    resolve, term_size, unify)
from .unfold import RuleLadder, UnfoldingScheme, applicable, syntactic_unfold, unfold_runtime

__version__ = "0.1.0"
