"""Top-down, committed-choice execution of the original program.

The interpreter is iterative.  Goals after the recursive call are parked on
an explicit stack and run once the base case has been reached, so depth is
bounded by memory rather than by the host stack.
"""

from __future__ import annotations

from typing import Callable, Optional, Sequence

from .builtins import Work, exec_builtin
from .errors import ComputationFailed, NoRuleApplicable, StepLimitExceeded
from .rules import Answer, Program, Rule, StepStats, isolate, make_answer
from .terms import CONS, BindingStore, Var, VarGen, _copy, _unify, deref, format_term

DEFAULT_MAX_STEPS = 10 ** 7


def _occurrences(t, out: list) -> list:
    stack = [t]
    while stack:
        t = stack.pop()
        if type(t) is Var:
            out.append(t)
        elif type(t) is tuple:
            stack.extend(t[1:])
    return out


def _compile(rule: Rule):
    """Plan for trying ``rule``: whether the head is all distinct variables,
    and which guard goals can run as one-sided matches.

    ``X = P`` is a match when ``X`` stands for part of the call (a head
    variable or a variable bound by an earlier match) and ``P`` is linear in
    variables seen nowhere before.  Matching only binds those fresh pattern
    variables to subterms of the call, so it needs no occurs check and no
    copy of ``P``.
    """
    args = rule.head[1:]
    plain = all(type(a) is Var for a in args) and len(set(args)) == len(args)
    seen = set(_occurrences(rule.head, []))
    callside = set(args) if plain else set()
    steps = []
    for g in rule.guard:
        entry = None
        if type(g) is tuple and g[0] == "=" and len(g) == 3:
            for src, pat in ((g[1], g[2]), (g[2], g[1])):
                if type(src) is Var and src in callside:
                    occ = _occurrences(pat, [])
                    if len(occ) == len(set(occ)) and not seen.intersection(occ):
                        entry = (src, pat)
                        callside.update(occ)
                        break
        steps.append(entry if entry is not None else (None, g))
        seen.update(_occurrences(g, []))
    return plain, tuple(steps)


def _plan(rule: Rule):
    plan = rule.__dict__.get("_plan")
    if plan is None:
        plan = _compile(rule)
        object.__setattr__(rule, "_plan", plan)
    return plan


MATCHED, NO_MATCH, NEEDS_BINDING = 1, 0, -1


def _match(pat, t, m: dict, added: list) -> int:
    stack = [(pat, t)]
    pop, push = stack.pop, stack.append
    while stack:
        p, t = pop()
        tp = type(p)
        if tp is Var:
            m[p] = t
            added.append(p)
            continue
        while type(t) is Var:
            r = t.ref
            if r is None:
                return NEEDS_BINDING
            t = r
        if tp is tuple:
            if p[0] == CONS:
                # walk list spines side by side instead of stacking each cell
                while True:
                    if type(t) is not tuple or t[0] != CONS:
                        return NO_MATCH
                    h = p[1]
                    if type(h) is Var:
                        m[h] = t[1]
                        added.append(h)
                    else:
                        push((h, t[1]))
                    p, t = p[2], t[2]
                    if type(p) is not tuple or p[0] != CONS:
                        break
                    while type(t) is Var:
                        r = t.ref
                        if r is None:
                            return NEEDS_BINDING
                        t = r
                push((p, t))
                continue
            if type(t) is not tuple or len(t) != len(p) or t[0] != p[0]:
                return NO_MATCH
            for i in range(len(p) - 1, 0, -1):
                push((p[i], t[i]))
        elif tp is not type(t) or p != t:
            return NO_MATCH
    return MATCHED


def try_rule(rule: Rule, call, gen: VarGen, store: BindingStore, work: Optional[Work] = None,
             body: bool = True):
    """Rename ``rule`` apart and try it on ``call``.

    Returns the renamed ``(pre, rec, post)`` body after a successful guard
    (bindings from head matching and guard kept), or ``None`` with the store
    untouched.  With ``body=False`` the body is not built and ``()`` is
    returned on success.
    """
    head = rule.head
    if type(call) is not tuple or call[0] != head[0] or len(call) != len(head):
        return None
    plain, steps = _plan(rule)
    mark = store.mark()
    try:
        if plain:
            # head arguments are distinct variables: substitute, don't unify
            m = dict(zip(head[1:], call[1:]))
        else:
            m = {}
            if not _unify(_copy(head, m, gen), call, store):
                store.rollback(mark)
                return None
        for src, g in steps:
            if src is not None:
                added = []
                res = _match(g, m[src], m, added)
                if res == MATCHED:
                    continue
                for v in added:
                    del m[v]
                if res == NO_MATCH:
                    store.rollback(mark)
                    return None
                g = ("=", src, g)
            if not exec_builtin(_copy(g, m, gen), store, work):
                store.rollback(mark)
                return None
    except BaseException:
        store.rollback(mark)
        raise
    store.release(mark)
    if not body:
        return ()
    pre = [_copy(g, m, gen) for g in rule.body_pre]
    rec = _copy(rule.body_rec, m, gen) if rule.body_rec is not None else None
    post = [_copy(g, m, gen) for g in rule.body_post]
    return pre, rec, post


def run_goals(goals: Sequence, store: BindingStore, work: Optional[Work]) -> None:
    for g in goals:
        if not exec_builtin(g, store, work):
            raise ComputationFailed(f"body goal {format_term(g)} failed after commitment")


def run_original(goal, p: Program, max_steps: int = DEFAULT_MAX_STEPS,
                 on_step: Optional[Callable] = None) -> Answer:
    """Run ``goal`` with the rules of ``p`` tried in textual order.

    ``on_step(rule, stats)`` is called after each rule application, before
    the goals after the recursive call have run.
    """
    store = BindingStore()
    gen = VarGen()
    work = Work()
    stats = StepStats()
    rules = p.rules
    pending = []
    copy, mapping = isolate(goal)
    call = copy
    while True:
        for rule in rules:
            stats.guard_checks += 1
            res = try_rule(rule, call, gen, store, work)
            if res is not None:
                break
        else:
            raise NoRuleApplicable(f"no rule applies to {format_term(call)}")
        stats.rule_applications += 1
        if stats.rule_applications > max_steps:
            raise StepLimitExceeded(f"more than {max_steps} rule applications")
        pre, rec, post = res
        run_goals(pre, store, work)
        if on_step is not None:
            on_step(rule, stats)
        if rec is None:
            break
        stats.recursive_applications += 1
        if post:
            pending.append(post)
        call = deref(rec)
    while pending:
        run_goals(pending.pop(), store, work)
    stats.builtin_work = work.units
    return make_answer(copy, mapping, stats)


def recursion_depth(goal, p: Program, max_steps: int = DEFAULT_MAX_STEPS) -> int:
    """Number of recursive-rule applications in the computation of ``goal``."""
    return run_original(goal, p, max_steps).stats.recursive_applications
