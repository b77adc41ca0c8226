"""Reader for rule programs, goals and terms.

Rule syntax::

    [name @] head <=> guard | body.

``%`` starts a line comment, ``_`` is an anonymous variable and list sugar
``[a, b | T]`` is understood.  A ``true`` conjunct is dropped, so the padded
form the printer emits reads back to the same rule.
"""

from __future__ import annotations

import re
from typing import Dict, List, Optional, Tuple

from .errors import RuleSyntaxError
from .rules import Program, Rule
from .terms import CONS, NIL, Var, VarGen, functor_of

_TOKEN = re.compile(r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<int>\d+)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<name>[a-z][A-Za-z0-9_]*)
  | (?P<quoted>'(?:[^'\\]|\\.)*')
  | (?P<op><=>|=<|>=|=\\=|\\=|≠|[-+*=<>|@,()\[\].])
""", re.VERBOSE)

INFIX_OPS = {
    "=": 700, "is": 700, "<": 700, ">": 700, "=<": 700, ">=": 700,
    "\\=": 700, "=\\=": 700, "≠": 700,
    "+": 500, "-": 500, "*": 400,
}
# the same relation has three spellings; keep one
_CANONICAL = {"≠": "\\=", "=\\=": "\\="}


class _Tok:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind, self.text, self.line, self.col = kind, text, line, col

    def __repr__(self):
        return f"{self.kind}:{self.text}"


def _tokenize(text: str) -> List[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:
            raise RuleSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        s = m.group()
        if kind != "ws":
            toks.append(_Tok(kind, s, line, pos - line_start + 1))
        nl = s.count("\n")
        if nl:
            line += nl
            line_start = pos + s.rfind("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str, gen: Optional[VarGen] = None):
        self.toks = _tokenize(text)
        self.i = 0
        self.gen = gen or VarGen()
        self.vars: Dict[str, Var] = {}

    # token helpers
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "name") and t.text == text

    def error(self, msg: str, tok: Optional[_Tok] = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise RuleSyntaxError(f"{msg}, found {found}", tok.line, tok.col)

    def expect(self, text: str) -> _Tok:
        if not self.at(text):
            self.error(f"expected {text!r}")
        t = self.tok
        self.i += 1
        return t

    # terms
    def term(self, max_prec: int = 999):
        left = self.primary()
        left_prec = 0
        while True:
            t = self.tok
            op = t.text if t.kind in ("op", "name") else None
            p = INFIX_OPS.get(op)
            if p is None or p > max_prec:
                return left
            if p == 700 and left_prec == 700:
                self.error("operator priority clash")
            self.i += 1
            # yfx for + - *, xfx for the comparisons
            right = self.term(p - 1)
            left = (_CANONICAL.get(op, op), left, right)
            left_prec = p

    def primary(self):
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return int(t.text)
        if t.kind == "var":
            self.i += 1
            if t.text == "_":
                return self.gen.fresh()
            v = self.vars.get(t.text)
            if v is None:
                v = self.vars[t.text] = self.gen.fresh(t.text)
            return v
        if t.kind == "op" and t.text == "-":
            self.i += 1
            if self.tok.kind == "int":
                n = int(self.tok.text)
                self.i += 1
                return -n
            return ("-", self.term(200))
        if t.kind == "op" and t.text == "(":
            self.i += 1
            inner = self.term(1200)
            self.expect(")")
            return inner
        if t.kind == "op" and t.text == "[":
            return self.list_term()
        if t.kind in ("name", "quoted"):
            self.i += 1
            name = t.text
            if t.kind == "quoted":
                name = re.sub(r"\\(.)", r"\1", name[1:-1])
            if self.at("(") and self.toks[self.i].col == t.col + len(t.text) and self.toks[self.i].line == t.line:
                self.i += 1
                args = [self.term(999)]
                while self.at(","):
                    self.i += 1
                    args.append(self.term(999))
                self.expect(")")
                if name == CONS and len(args) != 2:
                    self.error("list cells take exactly two arguments", t)
                return (name,) + tuple(args)
            return name
        self.error("expected a term")

    def list_term(self):
        self.expect("[")
        if self.at("]"):
            self.i += 1
            return NIL
        items = [self.term(999)]
        while self.at(","):
            self.i += 1
            items.append(self.term(999))
        tail = NIL
        if self.at("|"):
            self.i += 1
            tail = self.term(999)
        self.expect("]")
        out = tail
        for x in reversed(items):
            out = (CONS, x, out)
        return out

    # goals
    def goals(self) -> List:
        """Comma-separated conjunction; parenthesized groups are flattened."""
        out = []
        while True:
            if self.at("("):
                save = self.i
                self.i += 1
                try:
                    inner = self.goals()
                    self.expect(")")
                except RuleSyntaxError:
                    # not a group: an arithmetic term such as (A+1)>B
                    self.i = save
                    inner = [self.term(999)]
                else:
                    if self.tok.kind == "op" and self.tok.text in INFIX_OPS:
                        self.i = save
                        inner = [self.term(999)]
                out.extend(inner)
            else:
                out.append(self.term(999))
            if not self.at(","):
                return [g for g in out if g != "true"]
            self.i += 1

    def rule(self) -> Rule:
        start = self.tok
        self.vars = {}
        name = None
        if self.tok.kind == "name" and self.toks[self.i + 1].text == "@":
            name = self.tok.text
            self.i += 2
        head = self.term(999)
        if type(head) is not tuple and not isinstance(head, str):
            self.error("rule head must be a constraint", start)
        if isinstance(head, str):
            self.error("rule head needs arguments", start)
        self.expect("<=>")
        guard = self.goals()
        self.expect("|")
        body = self.goals()
        pred = functor_of(head)
        rec_at = [k for k, g in enumerate(body) if functor_of(g) == pred]
        if not rec_at:
            return Rule(head, tuple(guard), tuple(body), None, (), name)
        k = rec_at[0]
        # further self-calls stay in the post part so validation reports them
        return Rule(head, tuple(guard), tuple(body[:k]), body[k], tuple(body[k + 1:]), name)


def parse_rules(text: str, gen: Optional[VarGen] = None) -> List[Rule]:
    p = _Parser(text, gen)
    rules = []
    while p.tok.kind != "eof":
        rules.append(p.rule())
        p.expect(".")
    return rules


def parse_program(text: str, gen: Optional[VarGen] = None) -> Program:
    """Parse rules for one constraint.  The recursive rule is moved first."""
    rules = parse_rules(text, gen)
    if not rules:
        raise RuleSyntaxError("empty program", 1, 1)
    preds = {r.predicate for r in rules}
    if len(preds) > 1:
        names = ", ".join(sorted(f"{f}/{a}" for f, a in preds))
        raise RuleSyntaxError(f"rules define more than one constraint: {names}", 1, 1)
    rec = [r for r in rules if r.is_recursive]
    base = [r for r in rules if not r.is_recursive]
    return Program(rules[0].predicate, tuple(rec + base))


def parse_term(text: str, gen: Optional[VarGen] = None, varmap: Optional[Dict[str, Var]] = None):
    p = _Parser(text, gen)
    if varmap is not None:
        p.vars = varmap
    t = p.term(1200)
    if p.at("."):
        p.i += 1
    if p.tok.kind != "eof":
        p.error("unexpected text after term")
    return t


def parse_goal(text: str, gen: Optional[VarGen] = None) -> Tuple[object, Dict[str, Var]]:
    """A single constraint call and its named variables."""
    p = _Parser(text, gen)
    t = p.term(999)
    if p.at("."):
        p.i += 1
    if p.tok.kind != "eof":
        p.error("unexpected text after goal")
    if type(t) is not tuple:
        raise RuleSyntaxError("goal must be a constraint with arguments", 1, 1)
    return t, dict(p.vars)

