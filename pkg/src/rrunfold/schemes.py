"""Unfold-and-simplify steps for the shipped rule templates.

Each step takes rule r_i (an instance of its template) and returns r_{i+1},
which does the work of two consecutive applications of r_i.

summation   s(A,C) <=> A>V | B is A-V, s(B,D), C is V*A-W+D
            V' = 2V, W' = 2W + V*V
reversal    r(A,B) <=> A=[x1,...,xm|C] | r(C,D), append(D,[xm,...,x1],B)
            the open list doubles; the reversed list is copy 2's elements
            reversed followed by copy 1's
sorting     s(L,S) <=> L=[x1,...,xm|L2] | MG, s(L2,S2), m(S0,S2,S)
            two chained copies; their pre-merged lists are merged before
            the recursive call
countdown   p(N) <=> N is not in 1..V | M is N-V, p(M)
            V' = 2V; the guard is written (N-1)*(N-V)>0, or N\\=1 for V=1
"""

from __future__ import annotations

from typing import Dict, List, Tuple

from .errors import TemplateMismatch
from .rules import Rule
from .terms import CONS, NIL, Var, VarGen, deref, list_parts, make_list, rename_apart
from .unfold import UnfoldingScheme


def _var(t) -> Var:
    if type(t) is not Var:
        raise TemplateMismatch(f"expected a variable, got {t!r}")
    return t


def _int(t) -> int:
    if type(t) is not int:
        raise TemplateMismatch(f"expected an integer parameter, got {t!r}")
    return t


def _match(cond: bool, what: str):
    if not cond:
        raise TemplateMismatch(what)


def _shape(t, functor: str, arity: int, what: str) -> tuple:
    _match(type(t) is tuple and t[0] == functor and len(t) == arity + 1, what)
    return t


# -- summation --------------------------------------------------------------

def summation_params(r: Rule) -> Tuple[int, int]:
    """The (V, W) of a summation-template rule."""
    f = r.head[0]
    head = _shape(r.head, f, 2, "head must have two arguments")
    a, c = _var(head[1]), _var(head[2])
    _match(len(r.guard) == 1 and len(r.body_pre) == 1 and len(r.body_post) == 1,
           "summation rule needs one guard, one pre and one post goal")
    g = _shape(r.guard[0], ">", 2, "guard must be A>V")
    _match(g[1] is a, "guard must test the first head argument")
    v = _int(g[2])
    pre = _shape(r.body_pre[0], "is", 2, "pre goal must be B is A-V")
    b = _var(pre[1])
    diff = _shape(pre[2], "-", 2, "pre goal must be B is A-V")
    _match(diff[1] is a and diff[2] == v and type(diff[2]) is int, "pre goal must be B is A-V")
    rec = _shape(r.body_rec, f, 2, "recursive call must be s(B,D)")
    _match(rec[1] is b, "recursive call must use B")
    d = _var(rec[2])
    post = _shape(r.body_post[0], "is", 2, "post goal must be C is V*A-W+D")
    _match(post[1] is c, "post goal must bind C")
    plus = _shape(post[2], "+", 2, "post goal must be C is V*A-W+D")
    _match(plus[2] is d, "post goal must add D")
    minus = _shape(plus[1], "-", 2, "post goal must be C is V*A-W+D")
    times = _shape(minus[1], "*", 2, "post goal must be C is V*A-W+D")
    _match(times[1] == v and type(times[1]) is int and times[2] is a, "coefficient must be V")
    w = _int(minus[2])
    return v, w


def summation_rule(functor: str, v: int, w: int, gen: VarGen = None) -> Rule:
    gen = gen or VarGen()
    a, b, c, d = (gen.fresh(n) for n in "ABCD")
    return Rule(
        head=(functor, a, c),
        guard=((">", a, v),),
        body_pre=(("is", b, ("-", a, v)),),
        body_rec=(functor, b, d),
        body_post=(("is", c, ("+", ("-", ("*", v, a), w), d)),),
    )


def step_summation(r: Rule) -> Rule:
    v, w = summation_params(r)
    return summation_rule(r.head[0], 2 * v, 2 * w + v * v)


# -- list reversal ----------------------------------------------------------

def reversal_parts(r: Rule) -> Tuple[List[Var], Var, Var, Var, Var]:
    """Element variables of the open list, its tail C, and head/call outputs."""
    f = r.head[0]
    head = _shape(r.head, f, 2, "head must have two arguments")
    a, b = _var(head[1]), _var(head[2])
    _match(len(r.guard) == 1 and not r.body_pre and len(r.body_post) == 1,
           "reversal rule needs one guard goal and one append")
    g = _shape(r.guard[0], "=", 2, "guard must be A=[...|C]")
    _match(g[1] is a, "guard must test the first head argument")
    elems, tail = list_parts(g[2])
    _match(bool(elems) and type(tail) is Var, "guard list must be open")
    _match(all(type(e) is Var for e in elems) and len(set(elems)) == len(elems),
           "guard list elements must be distinct variables")
    rec = _shape(r.body_rec, f, 2, "recursive call must be r(C,D)")
    _match(rec[1] is tail, "recursive call must take the open list's tail")
    d = _var(rec[2])
    app = _shape(r.body_post[0], "append", 3, "post goal must be append(D,F,B)")
    _match(app[1] is d and app[3] is b, "post goal must be append(D,F,B)")
    rev = list_parts(app[2])
    _match(rev[1] == NIL and rev[0] == elems[::-1], "append list must be the elements reversed")
    return elems, tail, a, b, d


def reversal_rule(functor: str, m: int, gen: VarGen = None) -> Rule:
    """Reversal template with ``m`` list elements."""
    gen = gen or VarGen()
    a, b, c, d = (gen.fresh(n) for n in "ABCD")
    xs = [gen.fresh() for _ in range(m)]
    return Rule(
        head=(functor, a, b),
        guard=(("=", a, make_list(xs, c)),),
        body_rec=(functor, c, d),
        body_post=(("append", d, make_list(xs[::-1]), b),),
    )


def step_reversal(r: Rule) -> Rule:
    elems, _, _, _, _ = reversal_parts(r)
    m = len(elems)
    gen = VarGen()
    a, b, c, d = (gen.fresh(n) for n in "ABCD")
    x1 = [gen.fresh() for _ in range(m)]
    x2 = [gen.fresh() for _ in range(m)]
    return Rule(
        head=(r.head[0], a, b),
        guard=(("=", a, make_list(x1 + x2, c)),),
        body_rec=(r.head[0], c, d),
        body_post=(("append", d, make_list(x2[::-1] + x1[::-1]), b),),
    )


# -- sorting ----------------------------------------------------------------

def sorting_parts(r: Rule):
    """Guard elements, recursion tail, the pre-merged list S0 and the outputs."""
    f = r.head[0]
    head = _shape(r.head, f, 2, "head must have two arguments")
    l, s = _var(head[1]), _var(head[2])
    _match(len(r.guard) == 1 and len(r.body_post) == 1, "sorting rule needs one guard and one merge")
    g = _shape(r.guard[0], "=", 2, "guard must be L=[...|L2]")
    _match(g[1] is l, "guard must test the first head argument")
    elems, tail = list_parts(g[2])
    _match(bool(elems) and type(tail) is Var, "guard list must be open")
    _match(all(type(e) is Var for e in elems) and len(set(elems)) == len(elems),
           "guard list elements must be distinct variables")
    for goal in r.body_pre:
        _shape(goal, "m", 3, "pre goals must be merges")
    rec = _shape(r.body_rec, f, 2, "recursive call must be s(L2,S2)")
    _match(rec[1] is tail, "recursive call must take the open list's tail")
    s2 = _var(rec[2])
    post = _shape(r.body_post[0], "m", 3, "post goal must be m(S0,S2,S)")
    _match(post[2] is s2 and post[3] is s, "post goal must be m(S0,S2,S)")
    return elems, tail, post[1], l, s


def _copy_goals(goals, gen, mapping) -> tuple:
    return tuple(rename_apart(g, gen, mapping) for g in goals)


def step_sorting(r: Rule) -> Rule:
    sorting_parts(r)
    gen = VarGen()
    m1: Dict[Var, object] = {}
    head1 = rename_apart(r.head, gen, m1)
    guard1, pre1, post1 = (_copy_goals(gs, gen, m1) for gs in (r.guard, r.body_pre, r.body_post))
    rec1 = rename_apart(r.body_rec, gen, m1)
    # the second copy's head is the first copy's recursive call
    m2: Dict[Var, object] = {r.head[1]: rec1[1], r.head[2]: rec1[2]}
    guard2, pre2, post2 = (_copy_goals(gs, gen, m2) for gs in (r.guard, r.body_pre, r.body_post))
    rec2 = rename_apart(r.body_rec, gen, m2)
    elems1, _ = list_parts(guard1[0][2])
    elems2, tail2 = list_parts(guard2[0][2])
    s3 = post1[0][1]
    s4 = post2[0][1]
    s0 = gen.fresh()
    return Rule(
        head=head1,
        guard=(("=", head1[1], make_list(elems1 + elems2, tail2)),),
        body_pre=tuple(pre1) + tuple(pre2) + (("m", s4, s3, s0),),
        body_rec=rec2,
        body_post=(("m", s0, rec2[2], head1[2]),),
    )


# -- countdown (does not terminate from p(0)) --------------------------------

def countdown_params(r: Rule) -> int:
    f = r.head[0]
    head = _shape(r.head, f, 1, "head must have one argument")
    n = _var(head[1])
    _match(len(r.guard) == 1 and len(r.body_pre) == 1 and not r.body_post,
           "countdown rule needs one guard and one pre goal")
    g = r.guard[0]
    if type(g) is tuple and g[0] == "\\=" and len(g) == 3 and g[1] is n and g[2] == 1:
        v = 1
    else:
        gt = _shape(g, ">", 2, "guard must be (N-1)*(N-V)>0")
        prod = _shape(gt[1], "*", 2, "guard must be (N-1)*(N-V)>0")
        lo = _shape(prod[1], "-", 2, "guard must be (N-1)*(N-V)>0")
        hi = _shape(prod[2], "-", 2, "guard must be (N-1)*(N-V)>0")
        _match(gt[2] == 0 and lo[1] is n and lo[2] == 1 and hi[1] is n, "guard must be (N-1)*(N-V)>0")
        v = _int(hi[2])
    pre = _shape(r.body_pre[0], "is", 2, "pre goal must be M is N-V")
    diff = _shape(pre[2], "-", 2, "pre goal must be M is N-V")
    _match(diff[1] is n and diff[2] == v, "pre goal must subtract V")
    rec = _shape(r.body_rec, f, 1, "recursive call must be p(M)")
    _match(rec[1] is pre[1], "recursive call must use M")
    return v


def step_countdown(r: Rule) -> Rule:
    v = 2 * countdown_params(r)
    gen = VarGen()
    n, m = gen.fresh("N"), gen.fresh("M")
    f = r.head[0]
    return Rule(
        head=(f, n),
        guard=((">", ("*", ("-", n, 1), ("-", n, v)), 0),),
        body_pre=(("is", m, ("-", n, v)),),
        body_rec=(f, m),
    )


SUMMATION = UnfoldingScheme(
    "summation", ("sum", 2), step_summation,
    "s(A,C) <=> A>V | B is A-V, s(B,D), C is V*A-W+D;  V'=2V, W'=2W+V*V")
REVERSAL = UnfoldingScheme(
    "reversal", ("r", 2), step_reversal,
    "r(A,B) <=> A=[x1..xm|C] | true, r(C,D), append(D,[xm..x1],B);  m'=2m")
SORTING = UnfoldingScheme(
    "sorting", ("s", 2), step_sorting,
    "s(L,S) <=> L=[x1..xm|L2] | MG, s(L2,S2), m(S0,S2,S);  m'=2m, mergings chained")
COUNTDOWN = UnfoldingScheme(
    "countdown", ("p", 1), step_countdown,
    "p(N) <=> (N-1)*(N-V)>0 | M is N-V, p(M);  V'=2V")

SCHEMES = {s.name: s for s in (SUMMATION, REVERSAL, SORTING, COUNTDOWN)}


def detect_scheme(r: Rule) -> UnfoldingScheme:
    """The shipped scheme whose template ``r`` is an instance of."""
    for scheme in SCHEMES.values():
        try:
            scheme.step(r)
        except TemplateMismatch:
            continue
        return scheme.for_predicate(r.predicate)
    raise TemplateMismatch("the recursive rule matches none of the shipped templates")
