"""Runtime repeated unfolding of a recursive rule, driven by a goal.

While the most unfolded rule so far still applies to the goal, the scheme's
step builds the next one (covering twice as many recursive steps) and puts
it in front.  The first rule found inapplicable is dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .errors import MatchFailure, UnfoldCapExceeded
from .interp import try_rule
from .rules import Program, Rule
from .terms import BindingStore, Var, VarGen, deref, rename_apart, substitute

DEFAULT_CAP = 4096


@dataclass(frozen=True)
class UnfoldingScheme:
    """Problem-specific unfold-and-simplify step for one rule template."""

    name: str
    predicate: Tuple[str, int]
    step: Callable[[Rule], Rule]
    template_doc: str = ""

    def for_predicate(self, predicate: Tuple[str, int]) -> "UnfoldingScheme":
        return UnfoldingScheme(self.name, predicate, self.step, self.template_doc)


@dataclass(frozen=True)
class RuleLadder:
    """Rules most unfolded first, ending with the base rule(s)."""

    rules: Tuple[Rule, ...]
    # unfolded rules r_1..r_k kept in the ladder
    rules_generated: int = 0

    @property
    def indices(self) -> List[Optional[int]]:
        return [r.level for r in self.rules]

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)


def applicable(r: Rule, goal, gen: Optional[VarGen] = None) -> bool:
    """Would ``r`` fire on ``goal``?  Nothing stays bound either way."""
    store = BindingStore()
    mark = store.mark()
    try:
        return try_rule(r, deref(goal), gen or VarGen(), store, body=False) is not None
    finally:
        store.rollback(mark)


def initial_rules(p: Program) -> List[Rule]:
    """The program's rules with r_0 marked as level 0 and base rules unlevelled."""
    return [p.rules[0].with_level(0)] + [r.with_level(None) for r in p.rules[1:]]


def extend_ladder(goal, rules: Sequence[Rule], scheme: UnfoldingScheme, cap: int = DEFAULT_CAP,
                  generated: int = 0) -> Tuple[List[Rule], int]:
    """Keep unfolding the front rule while it applies to ``goal``.

    Returns ``(rules, steps)``: the front rule of ``rules`` does not apply to
    the goal, and ``steps`` new rules were put in front.  ``generated``
    counts rules made earlier, against the cap.
    """
    rules = list(rules)
    gen = VarGen()
    made = []
    front = rules[0]
    while front.is_recursive and applicable(front, goal, gen):
        if generated + len(made) >= cap:
            raise UnfoldCapExceeded(f"more than {cap} unfolded rules for one goal")
        nxt = scheme.step(front).with_level(front.level + 1)
        made.append(nxt)
        front = nxt
    made.reverse()
    return made + rules, len(made)


def unfold_runtime(goal, p: Program, s: UnfoldingScheme, cap: int = DEFAULT_CAP) -> RuleLadder:
    rules, steps = extend_ladder(goal, initial_rules(p), s, cap)
    # the first inapplicable rule is discarded
    return RuleLadder(tuple(rules[1:]), max(steps - 1, 0))


# -- syntactic unfolding (test oracle) --------------------------------------

def syntactic_unfold(r: Rule) -> Rule:
    """Unfold the recursive call of ``r`` with a renamed copy of ``r``.

    No simplification: the result keeps both guards, both bodies and the
    equation between the first copy's call and the second copy's head.
    Variables the first body defines (``X is E`` or ``X = T``) are replaced
    by their definitions in the second guard so that it can be checked
    before commitment.
    """
    if r.body_rec is None:
        raise MatchFailure("a base rule has no recursive call to unfold")
    gen = VarGen()
    c1 = _rename_rule(r, gen)
    c2 = _rename_rule(r, gen)
    rec1 = c1.body_rec
    if type(rec1) is not tuple or rec1[0] != c2.head[0] or len(rec1) != len(c2.head):
        raise MatchFailure("the recursive call does not match the rule head")
    theta: Dict[Var, object] = {}
    for hv, a in zip(c2.head[1:], rec1[1:]):
        if type(hv) is not Var or hv in theta:
            raise MatchFailure("the head arguments are not distinct variables")
        theta[hv] = a
    defs: Dict[Var, object] = {}
    for g in c1.body_pre:
        if type(g) is tuple and g[0] in ("is", "=") and len(g) == 3 and type(g[1]) is Var:
            defs[g[1]] = substitute(g[2], defs)
    guard2 = tuple(substitute(substitute(g, theta), defs) for g in c2.guard)
    link = ("=", rec1, c2.head)
    return Rule(
        head=c1.head,
        guard=c1.guard + guard2,
        body_pre=c1.body_pre + (link,) + c2.body_pre,
        body_rec=c2.body_rec,
        body_post=c2.body_post + c1.body_post,
        name=r.name,
        level=None if r.level is None else r.level + 1,
    )


def _rename_rule(r: Rule, gen: VarGen) -> Rule:
    m: Dict[Var, Var] = {}

    def cp(t):
        return rename_apart(t, gen, m)

    return Rule(cp(r.head), tuple(cp(g) for g in r.guard), tuple(cp(g) for g in r.body_pre),
                cp(r.body_rec) if r.body_rec is not None else None,
                tuple(cp(g) for g in r.body_post), r.name, r.level)
