"""Engine facade: register a recursion once, then answer calls by unfolding
and meta-interpreting.

Unfolded rules do not depend on the goal that triggered them, so a
registration keeps the longest ladder built so far and reuses it.  A later
call that needs deeper rules extends the cache in front; a call that needs
fewer starts further down the cache.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from .errors import DuplicateRegistration, NotRegistered, SchemeMismatch
from .interp import DEFAULT_MAX_STEPS
from .meta import run_unfolded
from .rules import Answer, Program, Rule, StepStats, validate_program
from .terms import deref, functor_of
from .unfold import DEFAULT_CAP, RuleLadder, UnfoldingScheme, applicable, extend_ladder, initial_rules


@dataclass
class Registration:
    predicate: Tuple[str, int]
    program: Program
    scheme: UnfoldingScheme
    unfold_cap: int = DEFAULT_CAP
    max_steps: int = DEFAULT_MAX_STEPS
    use_cache: bool = True
    # [r_K, ..., r_0, base...]; r_K may not apply to any goal seen so far
    cache: Tuple[Rule, ...] = ()
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def __post_init__(self):
        if not self.cache:
            self.cache = tuple(initial_rules(self.program))

    @property
    def cached_rules(self) -> int:
        """Unfolded rules r_1.. held in the cache."""
        return self.cache[0].level

    def ladder_for(self, goal, stats: StepStats) -> RuleLadder:
        if not self.use_cache:
            rules, steps = extend_ladder(goal, initial_rules(self.program), self.scheme, self.unfold_cap)
            ladder = RuleLadder(tuple(rules[1:]), max(steps - 1, 0))
            stats.rules_generated = ladder.rules_generated
            stats.rules_built = steps
            return ladder
        cache = self.cache
        top = cache[0].level
        # replay the unfolder's checks r_0, r_1, ... against the cached rules
        i = 0
        while i <= top and applicable(cache[top - i], goal):
            i += 1
        if i > top:
            with self._lock:
                cache = self.cache
                top = cache[0].level
                # another call may have extended the cache meanwhile
                while i <= top and applicable(cache[top - i], goal):
                    i += 1
                if i > top:
                    rules, steps = extend_ladder(goal, cache, self.scheme, self.unfold_cap,
                                                 generated=top)
                    # swap in the longer ladder in one assignment
                    self.cache = cache = tuple(rules)
                    stats.cache_extended = True
                    stats.rules_built = steps
                    i = top = cache[0].level
        # r_i is the first rule that does not apply; keep everything below it
        ladder = RuleLadder(cache[top - i + 1:], max(i - 1, 0))
        stats.rules_generated = ladder.rules_generated
        return ladder

    def call(self, goal) -> Answer:
        goal = deref(goal)
        if functor_of(goal) != self.predicate:
            raise NotRegistered(f"goal {functor_of(goal)} does not match {self.predicate}")
        stats = StepStats()
        ladder = self.ladder_for(goal, stats)
        return run_unfolded(goal, ladder, self.max_steps, stats)


class Engine:
    """Registrations keyed by constraint symbol and arity."""

    def __init__(self, use_cache: bool = True):
        self.use_cache = use_cache
        self.registrations: Dict[Tuple[str, int], Registration] = {}

    def register(self, predicate, program: Program, scheme: UnfoldingScheme,
                 unfold_cap: int = DEFAULT_CAP, max_steps: int = DEFAULT_MAX_STEPS,
                 use_cache: Optional[bool] = None) -> Registration:
        predicate = tuple(predicate)
        validate_program(program)
        if program.predicate != predicate:
            raise SchemeMismatch(f"program defines {program.predicate}, not {predicate}")
        if scheme.predicate != predicate:
            raise SchemeMismatch(f"scheme {scheme.name} is for {scheme.predicate}, not {predicate}")
        if predicate in self.registrations:
            raise DuplicateRegistration(f"{predicate[0]}/{predicate[1]} is already registered")
        reg = Registration(predicate, program, scheme, unfold_cap, max_steps,
                           self.use_cache if use_cache is None else use_cache)
        self.registrations[predicate] = reg
        return reg

    def call(self, goal) -> Answer:
        goal = deref(goal)
        reg = self.registrations.get(functor_of(goal))
        if reg is None:
            name, arity = functor_of(goal)
            raise NotRegistered(f"no recursion registered for {name}/{arity}")
        return reg.call(goal)
