"""Single-step rule application for comparing unfolded rules."""

from rrunfold.interp import run_goals, try_rule
from rrunfold.rules import isolate
from rrunfold.terms import BindingStore, VarGen, deref, resolve, unify


def apply_chain(rules, goal, finish):
    """Apply ``rules`` in turn, one step each, starting from ``goal``.

    The last recursive call is not run: its output is unified with
    ``finish(remaining_input)``, then the parked goals run innermost first.
    Returns ``(remaining_input, goal_output)``, or ``None`` if some rule
    does not apply.
    """
    store, gen = BindingStore(), VarGen()
    copy, _ = isolate(goal)
    call = copy
    posts = []
    for r in rules:
        res = try_rule(r, call, gen, store)
        if res is None:
            return None
        pre, rec, post = res
        run_goals(pre, store, None)
        posts.append(post)
        call = deref(rec)
    remaining = resolve(call[1])
    assert unify(call[2], finish(remaining), store)
    for post in reversed(posts):
        run_goals(post, store, None)
    return remaining, resolve(copy[2])


def rule_key(r):
    """A term standing for the whole rule, for variant comparison."""
    return ("rule", r.head, ("guard",) + tuple(r.guard), ("pre",) + tuple(r.body_pre),
            r.body_rec if r.body_rec is not None else "none", ("post",) + tuple(r.body_post))


def same_rules(xs, ys):
    from rrunfold.terms import is_variant
    return len(xs) == len(ys) and all(is_variant(rule_key(a), rule_key(b)) for a, b in zip(xs, ys))
