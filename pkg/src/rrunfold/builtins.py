"""Built-in constraints usable in guards and rule bodies.

Registered goals: ``=/2``, ``is/2``, ``</2``, ``>/2``, ``=</2``, ``>=/2``,
``\\=/2`` (integer disequality, also read as ``≠`` and ``=\\=``),
``append/3``, ``m/3`` (merge of ascending integer lists) and ``true/0``.

Every builtin returns ``True``/``False``.  A failing builtin leaves no
bindings behind.
"""

from __future__ import annotations

from typing import Callable, Dict, Optional, Sequence, Tuple

from .errors import InstantiationError, UnboundVariable, UnknownBuiltin, UnknownOperator
from .terms import CONS, NIL, BindingStore, Var, deref, occurs, unify


class Work:
    """Counter for the term nodes builtins walk or build."""

    __slots__ = ("units",)

    def __init__(self):
        self.units = 0


def eval_arith(expr, store: Optional[BindingStore] = None) -> int:
    """Value of a ground ``+``/``-``/``*`` expression over integers."""
    while type(expr) is Var:
        r = expr.ref
        if r is None:
            raise UnboundVariable("arithmetic on an unbound variable")
        expr = r
    te = type(expr)
    if te is int:
        return expr
    if te is tuple:
        op = expr[0]
        if len(expr) == 3:
            a = eval_arith(expr[1])
            b = eval_arith(expr[2])
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
        elif len(expr) == 2 and op == "-":
            return -eval_arith(expr[1])
        raise UnknownOperator(f"unknown arithmetic operator {op}/{len(expr) - 1}")
    raise UnknownOperator(f"not an arithmetic expression: {expr!r}")


def _deref_int(t) -> int:
    while type(t) is Var:
        r = t.ref
        if r is None:
            raise InstantiationError("list element is unbound")
        t = r
    if type(t) is not int:
        raise InstantiationError(f"expected an integer list element, got {t!r}")
    return t


def _bind_fresh(z, value, extra_check, store) -> bool:
    """Unify output ``z`` with a newly built ``value``.

    When ``z`` is unbound only ``extra_check`` (the parts of ``value`` that
    existed before the builtin ran) can contain it, so the occurs check is
    restricted to those.
    """
    while type(z) is Var and z.ref is not None:
        z = z.ref
    if type(z) is Var:
        for part in extra_check:
            if occurs(z, part):
                return False
        store.bind(z, value)
        return True
    return unify(z, value, store)


def _append(x, y, z, store, work) -> bool:
    items = []
    add = items.append
    suspicious = []
    while True:
        # list cells always have two arguments, so only the functor is checked
        while type(x) is tuple:
            if x[0] != CONS:
                return False
            h = x[1]
            if type(h) is not int:
                h = deref(h)
                if type(h) is not int:
                    suspicious.append(h)
            add(h)
            x = x[2]
        if type(x) is Var:
            if x.ref is None:
                raise InstantiationError("append/3: first argument is not a proper list")
            x = x.ref
        elif x == NIL:
            break
        else:
            return False
    out = y
    for h in reversed(items):
        out = (CONS, h, out)
    if work is not None:
        work.units += len(items)
    suspicious.append(y)
    return _bind_fresh(z, out, suspicious, store)


def _merge(x, y, z, store, work) -> bool:
    """Stable merge: on ties the element of ``x`` comes first.

    Both inputs must be proper ascending integer lists; the part of an input
    left over once the other one is exhausted is shared, not walked.
    """
    x, y = deref(x), deref(y)
    out = []
    add = out.append
    xc = type(x) is tuple and x[0] == CONS
    yc = type(y) is tuple and y[0] == CONS
    if xc and yc:
        a = _deref_int(x[1])
        b = _deref_int(y[1])
        while True:
            if b < a:
                add(b)
                y = y[2]
                if type(y) is not tuple:
                    y = deref(y)
                    if type(y) is not tuple:
                        yc = False
                        break
                if y[0] != CONS:
                    return False
                b = y[1]
                if type(b) is not int:
                    b = _deref_int(b)
            else:
                add(a)
                x = x[2]
                if type(x) is not tuple:
                    x = deref(x)
                    if type(x) is not tuple:
                        xc = False
                        break
                if x[0] != CONS:
                    return False
                a = x[1]
                if type(a) is not int:
                    a = _deref_int(a)
    if type(x) is Var or type(y) is Var:
        raise InstantiationError("m/3: inputs must be proper lists")
    if xc and y == NIL:
        rest = x
    elif yc and x == NIL:
        rest = y
    elif x == NIL and y == NIL:
        rest = NIL
    else:
        return False
    for h in reversed(out):
        rest = (CONS, h, rest)
    if work is not None:
        work.units += len(out)
    return _bind_fresh(z, rest, (), store)


def _compare(op: str) -> Callable:
    def check(a, b, store, work):
        x, y = eval_arith(a), eval_arith(b)
        if work is not None:
            work.units += 2
        if op == "<":
            return x < y
        if op == ">":
            return x > y
        if op == "=<":
            return x <= y
        if op == ">=":
            return x >= y
        return x != y
    check.__name__ = f"compare_{op}"
    return check


def _eq(a, b, store, work):
    return unify(a, b, store)


def _is(a, b, store, work):
    value = eval_arith(b)
    if work is not None:
        work.units += 1 + abs(value).bit_length() // 64
    while type(a) is Var and a.ref is not None:
        a = a.ref
    if type(a) is Var:
        store.bind(a, value)
        return True
    return unify(a, value, store)


BUILTINS: Dict[Tuple[str, int], Callable] = {
    ("=", 2): _eq,
    ("is", 2): _is,
    ("<", 2): _compare("<"),
    (">", 2): _compare(">"),
    ("=<", 2): _compare("=<"),
    (">=", 2): _compare(">="),
    ("\\=", 2): _compare("\\="),
    ("append", 3): _append,
    ("m", 3): _merge,
}

# spellings accepted by the parser for integer disequality
DISEQUALITY_ALIASES = ("≠", "=\\=")


def is_builtin(goal) -> bool:
    goal = deref(goal)
    if goal == "true":
        return True
    return type(goal) is tuple and (goal[0], len(goal) - 1) in BUILTINS


def exec_builtin(goal, store: BindingStore, work: Optional[Work] = None) -> bool:
    goal = deref(goal)
    if goal == "true":
        return True
    if type(goal) is not tuple:
        raise UnknownBuiltin(f"not a builtin goal: {goal!r}")
    fn = BUILTINS.get((goal[0], len(goal) - 1))
    if fn is None:
        raise UnknownBuiltin(f"unknown builtin {goal[0]}/{len(goal) - 1}")
    mark = store.mark()
    try:
        ok = fn(*goal[1:], store, work)
    except BaseException:
        store.rollback(mark)
        raise
    if ok:
        store.release(mark)
    else:
        store.rollback(mark)
    return ok


def check_guard(goals: Sequence, store: BindingStore, work: Optional[Work] = None) -> bool:
    """Run ``goals`` left to right; on failure undo every binding they made."""
    mark = store.mark()
    try:
        for g in goals:
            if not exec_builtin(g, store, work):
                store.rollback(mark)
                return False
    except BaseException:
        store.rollback(mark)
        raise
    store.release(mark)
    return True
