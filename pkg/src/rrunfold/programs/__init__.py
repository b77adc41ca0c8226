"""Shipped example programs, their goals and independent answer oracles.

``size`` means the input number for summation and the list length for
reversal and sorting.  Recursion depth is ``size - 1`` for summation and
``size`` for the list examples.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Callable, Optional

from ..parser import parse_program
from ..rules import Program, validate_program
from ..schemes import COUNTDOWN, REVERSAL, SORTING, SUMMATION
from ..terms import VarGen, make_list
from ..unfold import UnfoldingScheme


def program_text(name: str) -> str:
    return resources.files(__package__).joinpath(f"{name}.chr").read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def load(name: str) -> Program:
    p = parse_program(program_text(name))
    validate_program(p)
    return p


def summation_input(size: int, seed: Optional[int] = None) -> int:
    return size


def list_input(size: int, seed: Optional[int] = None) -> list:
    return list(range(1, size + 1))


def permutation_input(size: int, seed: Optional[int] = None) -> list:
    xs = list(range(1, size + 1))
    random.Random(seed).shuffle(xs)
    return xs


def summation_oracle(n: int) -> int:
    return n * (n + 1) // 2


def reversal_oracle(xs: list) -> list:
    return xs[::-1]


def sorting_oracle(xs: list) -> list:
    return sorted(xs)


@dataclass(frozen=True)
class Example:
    name: str
    file: str
    scheme: UnfoldingScheme
    make_input: Callable
    oracle: Callable
    # recursion depth for a given size
    depth: Callable[[int], int]

    @property
    def program(self) -> Program:
        return load(self.file)

    def goal(self, value, functor: Optional[str] = None):
        """Goal ``f(Input, Out)``; returns the goal and its output variable."""
        out = VarGen().fresh("Out")
        arg = make_list(value) if isinstance(value, list) else value
        return (functor or self.program.predicate[0], arg, out), out

    def expected(self, value):
        """The oracle answer as a term."""
        res = self.oracle(value)
        return make_list(res) if isinstance(res, list) else res


EXAMPLES = {
    "summation": Example("summation", "summation", SUMMATION, summation_input, summation_oracle,
                         lambda n: n - 1),
    "reversal": Example("reversal", "reversal", REVERSAL, list_input, reversal_oracle, lambda n: n),
    "sorting": Example("sorting", "sorting", SORTING, permutation_input, sorting_oracle, lambda n: n),
}


def countdown_program() -> Program:
    return load("countdown")


COUNTDOWN_SCHEME = COUNTDOWN
