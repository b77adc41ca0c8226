"""Rules, programs, answers and run statistics.

A rule body is kept in three parts, the way the unfolder and the
meta-interpreter consume it: builtins before the recursive call, the
recursive call itself (absent for base cases), and builtins after it.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

from .builtins import is_builtin
from .errors import HeadNotVariables, MultipleRecursiveRules, NonLinearRecursion, ValidationError
from .terms import Var, VarGen, deref, format_term, functor_of, is_ground, rename_apart, resolve, var_namer


@dataclass(frozen=True)
class Rule:
    head: tuple
    guard: Tuple = ()
    body_pre: Tuple = ()
    body_rec: Optional[tuple] = None
    body_post: Tuple = ()
    name: Optional[str] = None
    # unfolding level i of rule r_i; None for base-case rules
    level: Optional[int] = None

    @property
    def predicate(self) -> Tuple[str, int]:
        return functor_of(self.head)

    @property
    def is_recursive(self) -> bool:
        return self.body_rec is not None

    def with_level(self, level: Optional[int]) -> "Rule":
        return replace(self, level=level)

    def __str__(self):
        return format_rule(self)


@dataclass(frozen=True)
class Program:
    predicate: Tuple[str, int]
    rules: Tuple[Rule, ...]

    @property
    def recursive_rule(self) -> Rule:
        return self.rules[0]

    @property
    def base_rules(self) -> Tuple[Rule, ...]:
        return self.rules[1:]

    def renamed(self, functor: str) -> "Program":
        """The same program with its constraint symbol replaced by ``functor``."""
        old = self.predicate[0]

        def swap(t):
            if type(t) is tuple and t[0] == old and len(t) - 1 == self.predicate[1]:
                return (functor,) + t[1:]
            return t

        rules = tuple(replace(r, head=swap(r.head), body_rec=swap(r.body_rec) if r.body_rec else None)
                      for r in self.rules)
        return Program((functor, self.predicate[1]), rules)

    def __str__(self):
        return format_program(self)


@dataclass
class StepStats:
    rule_applications: int = 0
    recursive_applications: int = 0
    rules_generated: int = 0
    guard_checks: int = 0
    builtin_work: int = 0
    applied_rule_indices: List[int] = field(default_factory=list)
    cache_extended: bool = False
    # unfolding steps actually performed for this call (0 on a cache hit)
    rules_built: int = 0


@dataclass
class Answer:
    """Final state of a computation: the goal's variables and run counters."""

    goal: object
    bindings: Dict[str, object]
    stats: StepStats

    def __getitem__(self, name: str):
        return self.bindings[name]

    def __str__(self):
        if not self.bindings:
            return "true"
        return ", ".join(f"{k} = {format_term(v)}" for k, v in self.bindings.items())


def isolate(goal):
    """A private copy of ``goal`` for one run, and the variable mapping used.

    Runs bind the copy, so the caller's goal is never mutated.
    """
    mapping = {}
    return rename_apart(goal, VarGen(), mapping), mapping


def make_answer(copy, mapping, stats: StepStats) -> Answer:
    bindings = {}
    for v, c in mapping.items():
        if v.name and not v.name.startswith("_") and v.name not in bindings:
            value = resolve(c)
            if is_ground(value):
                bindings[v.name] = value
    return Answer(resolve(copy), bindings, stats)


# -- validation -------------------------------------------------------------

def validate_program(p: Program) -> bool:
    if not p.rules:
        raise ValidationError("program has no rules")
    name, arity = p.predicate
    recursive = [i for i, r in enumerate(p.rules) if r.is_recursive]
    if len(recursive) > 1:
        raise MultipleRecursiveRules(f"{name}/{arity} has {len(recursive)} recursive rules")
    if not recursive:
        raise ValidationError(f"{name}/{arity} has no recursive rule")
    if recursive[0] != 0:
        raise ValidationError("the recursive rule must come first")
    for r in p.rules:
        if r.predicate != p.predicate:
            raise ValidationError(f"rule head {format_term(r.head)} does not define {name}/{arity}")
        for g in r.guard:
            if not is_builtin(g):
                raise ValidationError(f"guard goal {format_term(g)} is not a builtin")
        for g in r.body_pre + r.body_post:
            if functor_of(g) == p.predicate:
                raise NonLinearRecursion(f"rule for {name}/{arity} calls itself more than once")
            if not is_builtin(g):
                raise ValidationError(f"body goal {format_term(g)} is neither a builtin nor {name}/{arity}")
        if r.is_recursive and functor_of(r.body_rec) != p.predicate:
            raise ValidationError("the recursive call must use the head's constraint symbol")
    head_args = [deref(a) for a in p.recursive_rule.head[1:]]
    if not all(type(a) is Var for a in head_args) or len(set(head_args)) != len(head_args):
        raise HeadNotVariables("the recursive rule's head arguments must be distinct variables")
    return True


# -- printing ---------------------------------------------------------------

def _conj(goals, name) -> str:
    if not goals:
        return "true"
    text = ", ".join(format_term(g, name) for g in goals)
    return f"({text})" if len(goals) > 1 else text


def format_rule(rule: Rule, name=None) -> str:
    """Concrete syntax with the three-conjunct body padding re-emitted."""
    if name is None:
        name = var_namer()
    head = format_term(rule.head, name)
    guard = ", ".join(format_term(g, name) for g in rule.guard) or "true"
    rec = format_term(rule.body_rec, name) if rule.body_rec is not None else "true"
    body = f"{_conj(rule.body_pre, name)}, {rec}, {_conj(rule.body_post, name)}"
    prefix = f"{rule.name} @ " if rule.name else ""
    return f"{prefix}{head} <=> {guard} | {body}"


def format_program(p: Program) -> str:
    return "".join(format_rule(r) + ".\n" for r in p.rules)
