"""Logic terms, fresh variables, unification and the trail-backed binding store.

Terms are plain Python values so the hot loops stay cheap:

* ``int`` is an integer (arbitrary precision),
* ``str`` is an atom (``"[]"`` is the empty list),
* ``tuple`` ``(functor, arg1, ..., argN)`` with ``N >= 1`` is a compound,
  list cells being ``(".", head, tail)``,
* :class:`Var` is a logic variable.

A variable's binding lives in its ``ref`` slot.  :class:`BindingStore` only
keeps the trail, and only while a mark is open, so committed bindings never
pin garbage.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterable, List, Optional, Tuple, Union

NIL = "[]"
CONS = "."

Term = Union["Var", int, str, tuple]


class Var:
    __slots__ = ("id", "name", "ref")

    def __init__(self, id: int, name: Optional[str] = None):
        self.id = id
        self.name = name
        self.ref = None

    def __repr__(self):
        return self.name if self.name else f"_G{self.id}"


# ids come from one process-wide counter, so variables made by different
# generators (parser, unfolder, interpreters) never share an id
_IDS = itertools.count(1)


class VarGen:
    """Issues variables with strictly increasing ids.

    ``counter`` is the number of variables this generator has made.
    """

    __slots__ = ("counter",)

    def __init__(self):
        self.counter = 0

    def fresh(self, name: Optional[str] = None) -> Var:
        self.counter += 1
        return Var(next(_IDS), name)


class BindingStore:
    """Binds variables and undoes bindings back to a mark.

    Marks nest.  Bindings made while no mark is open are committed at once
    and are not trailed.
    """

    __slots__ = ("trail", "depth")

    def __init__(self):
        self.trail: List[Var] = []
        self.depth = 0

    def bind(self, var: Var, value) -> None:
        var.ref = value
        if self.depth:
            self.trail.append(var)

    def mark(self) -> int:
        self.depth += 1
        return len(self.trail)

    def rollback(self, mark: int) -> None:
        trail = self.trail
        while len(trail) > mark:
            trail.pop().ref = None
        self.depth -= 1
        if not self.depth:
            trail.clear()

    def release(self, mark: int) -> None:
        """Close ``mark`` keeping its bindings."""
        self.depth -= 1
        if not self.depth:
            self.trail.clear()

    def lookup(self, var: Var):
        """The direct binding of ``var`` or ``None``."""
        return var.ref


# -- constructors and inspection --------------------------------------------

def compound(functor: str, *args) -> tuple:
    if not args:
        raise ValueError("compound terms need at least one argument")
    return (functor,) + args


def make_list(items: Iterable, tail=NIL):
    out = tail
    for item in reversed(list(items)):
        out = (CONS, item, out)
    return out


def is_cons(t) -> bool:
    return type(t) is tuple and len(t) == 3 and t[0] == CONS


def deref(t):
    while type(t) is Var:
        r = t.ref
        if r is None:
            return t
        t = r
    return t


def list_parts(t) -> Tuple[list, object]:
    """Split a (possibly open) list into its dereferenced elements and tail."""
    items = []
    t = deref(t)
    while type(t) is tuple and len(t) == 3 and t[0] == CONS:
        items.append(deref(t[1]))
        t = deref(t[2])
    return items, t


def proper_list_items(t) -> Optional[list]:
    items, tail = list_parts(t)
    return items if tail == NIL else None


def functor_of(t) -> Tuple[object, int]:
    t = deref(t)
    if type(t) is tuple:
        return t[0], len(t) - 1
    return t, 0


# -- unification ------------------------------------------------------------

def occurs(v: Var, t) -> bool:
    stack = [t]
    pop, push = stack.pop, stack.append
    while stack:
        t = pop()
        while True:
            tt = type(t)
            if tt is Var:
                if t is v:
                    return True
                t = t.ref
                if t is None:
                    break
            elif tt is tuple:
                last = len(t) - 1
                for i in range(1, last):
                    push(t[i])
                t = t[last]
            else:
                break
    return False


def unify(a, b, store: BindingStore) -> bool:
    """Make ``a`` and ``b`` identical.  On failure no binding survives."""
    mark = store.mark()
    if _unify(a, b, store):
        store.release(mark)
        return True
    store.rollback(mark)
    return False


def _unify(a, b, store: BindingStore) -> bool:
    stack = [(a, b)]
    pop, push = stack.pop, stack.append
    bind = store.bind
    while stack:
        a, b = pop()
        while type(a) is Var and a.ref is not None:
            a = a.ref
        while type(b) is Var and b.ref is not None:
            b = b.ref
        if a is b:
            continue
        ta, tb = type(a), type(b)
        if ta is Var:
            if tb is Var:
                # the younger variable points at the older one
                if a.id < b.id:
                    a, b = b, a
            elif tb is tuple and occurs(a, b):
                return False
            bind(a, b)
        elif tb is Var:
            if ta is tuple and occurs(b, a):
                return False
            bind(b, a)
        elif ta is tuple:
            if tb is not tuple or len(a) != len(b) or a[0] != b[0]:
                return False
            for i in range(len(a) - 1, 0, -1):
                push((a[i], b[i]))
        elif ta is not tb or a != b:
            return False
    return True


# -- copying and resolution -------------------------------------------------

def rename_apart(t, gen: VarGen, mapping: Optional[Dict[Var, Var]] = None):
    """Copy of the full resolution of ``t`` with every free variable replaced
    consistently by a fresh one.  ``mapping`` is extended in place so several
    terms can share one renaming."""
    if mapping is None:
        mapping = {}
    return _copy(t, mapping, gen)


def _copy(t, m, gen):
    while type(t) is Var:
        r = t.ref
        if r is None:
            v = m.get(t)
            if v is None:
                v = m[t] = gen.fresh()
            return v
        t = r
    if type(t) is not tuple:
        return t
    if len(t) == 3 and t[0] == CONS:
        heads = []
        while type(t) is tuple and len(t) == 3 and t[0] == CONS:
            heads.append(_copy(t[1], m, gen))
            t = t[2]
        out = _copy(t, m, gen)
        for h in reversed(heads):
            out = (CONS, h, out)
        return out
    return (t[0],) + tuple([_copy(a, m, gen) for a in t[1:]])


def substitute(t, mapping: Dict[Var, object]):
    """Replace variables by terms through ``mapping`` (no fresh variables).

    Variables missing from ``mapping`` are kept as they are.
    """
    tt = type(t)
    if tt is Var:
        return mapping.get(t, t)
    if tt is not tuple:
        return t
    if len(t) == 3 and t[0] == CONS:
        heads = []
        while type(t) is tuple and len(t) == 3 and t[0] == CONS:
            heads.append(substitute(t[1], mapping))
            t = t[2]
        out = substitute(t, mapping)
        for h in reversed(heads):
            out = (CONS, h, out)
        return out
    return (t[0],) + tuple([substitute(a, mapping) for a in t[1:]])


def resolve(t):
    """``t`` with every bound variable replaced by its value, recursively.

    Unchanged subterms are returned as the same objects.
    """
    t = deref(t)
    if type(t) is not tuple:
        return t
    if len(t) == 3 and t[0] == CONS:
        cells = []
        cur = t
        while type(cur) is tuple and len(cur) == 3 and cur[0] == CONS:
            cells.append(cur)
            cur = deref(cur[2])
        out = resolve(cur)
        changed = out is not cells[-1][2]
        for cell in reversed(cells):
            h = resolve(cell[1])
            if changed or h is not cell[1]:
                out = (CONS, h, out)
                changed = True
            else:
                out = cell
        return out
    args = [resolve(a) for a in t[1:]]
    if all(x is y for x, y in zip(args, t[1:])):
        return t
    return (t[0],) + tuple(args)


def term_vars(t) -> List[Var]:
    """Unbound variables of ``t`` in depth-first, left-to-right order."""
    seen = {}
    stack = [t]
    while stack:
        t = deref(stack.pop())
        tt = type(t)
        if tt is Var:
            seen.setdefault(t, None)
        elif tt is tuple:
            stack.extend(reversed(t[1:]))
    return list(seen)


def is_ground(t) -> bool:
    stack = [t]
    while stack:
        t = deref(stack.pop())
        if type(t) is Var:
            return False
        if type(t) is tuple:
            stack.extend(t[1:])
    return True


WORD_BITS = 64


def term_size(t) -> int:
    """Node count; an integer weighs one plus its extra machine words."""
    size = 0
    stack = [t]
    while stack:
        t = deref(stack.pop())
        size += 1
        tt = type(t)
        if tt is int:
            size += abs(t).bit_length() // WORD_BITS
        elif tt is tuple:
            stack.extend(t[1:])
    return size


def term_equal(a, b) -> bool:
    """Structural identity after dereferencing.  Iterative, unlike ``==`` on
    nested tuples, so long lists are fine."""
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        x, y = deref(x), deref(y)
        if x is y:
            continue
        tx = type(x)
        if tx is not type(y):
            return False
        if tx is tuple:
            if len(x) != len(y) or x[0] != y[0]:
                return False
            stack.extend(zip(x[1:], y[1:]))
        elif tx is Var or x != y:
            return False
    return True


def is_variant(a, b) -> bool:
    """True iff ``a`` and ``b`` are equal up to a bijective variable renaming."""
    fwd: Dict[Var, Var] = {}
    bwd: Dict[Var, Var] = {}
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        x, y = deref(x), deref(y)
        tx, ty = type(x), type(y)
        if tx is Var or ty is Var:
            if tx is not ty:
                return False
            if fwd.setdefault(x, y) is not y or bwd.setdefault(y, x) is not x:
                return False
        elif tx is tuple:
            if ty is not tuple or len(x) != len(y) or x[0] != y[0]:
                return False
            stack.extend(zip(x[1:], y[1:]))
        elif tx is not ty or x != y:
            return False
    return True


# -- printing ---------------------------------------------------------------

INFIX = {
    "=": (700, "xfx"), "is": (700, "xfx"), "<": (700, "xfx"), ">": (700, "xfx"),
    "=<": (700, "xfx"), ">=": (700, "xfx"), "\\=": (700, "xfx"), "=\\=": (700, "xfx"),
    "+": (500, "yfx"), "-": (500, "yfx"), "*": (400, "yfx"),
}
PREFIX_MINUS = 200

_SOLO = {"[]", "!", ";", "{}"}


def _atom_text(a: str) -> str:
    if a in _SOLO or (a[:1].islower() and a.replace("_", "a").isalnum()):
        return a
    return "'" + a.replace("\\", "\\\\").replace("'", "\\'") + "'"


def var_namer(start: int = 0):
    """Name variables A..Z, A1..Z1, ... in order of first request."""
    names: Dict[Var, str] = {}

    def name(v: Var) -> str:
        n = names.get(v)
        if n is None:
            i = len(names) + start
            n = chr(ord("A") + i % 26) + (str(i // 26) if i >= 26 else "")
            names[v] = n
        return n

    return name


def format_term(t, name=None, prec: int = 999) -> str:
    if name is None:
        name = repr
    out: List[str] = []
    _fmt(t, name, prec, out)
    return "".join(out)


def _fmt(t, name, prec, out):
    t = deref(t)
    tt = type(t)
    if tt is Var:
        out.append(name(t))
    elif tt is int:
        out.append(f"({t})" if t < 0 and prec < 999 else str(t))
    elif tt is str:
        out.append(_atom_text(t))
    elif len(t) == 3 and t[0] == CONS:
        out.append("[")
        first = True
        while True:
            if not first:
                out.append(",")
            _fmt(t[1], name, 999, out)
            first = False
            t = deref(t[2])
            if not (type(t) is tuple and len(t) == 3 and t[0] == CONS):
                break
        if t != NIL:
            out.append("|")
            _fmt(t, name, 999, out)
        out.append("]")
    elif len(t) == 3 and t[0] in INFIX:
        p, kind = INFIX[t[0]]
        lp, rp = (p, p - 1) if kind == "yfx" else (p - 1, p - 1)
        if p > prec:
            out.append("(")
        _fmt(t[1], name, lp, out)
        op = t[0]
        out.append(f" {op} " if op.isalpha() else op)
        _fmt(t[2], name, rp, out)
        if p > prec:
            out.append(")")
    elif len(t) == 2 and t[0] == "-":
        if PREFIX_MINUS > prec:
            out.append("(")
        out.append("-")
        _fmt(t[1], name, PREFIX_MINUS, out)
        if PREFIX_MINUS > prec:
            out.append(")")
    else:
        out.append(_atom_text(t[0]))
        out.append("(")
        for i, a in enumerate(t[1:]):
            if i:
                out.append(",")
            _fmt(a, name, 999, out)
        out.append(")")
