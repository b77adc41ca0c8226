"""Exception hierarchy.

Unification failure and guard failure are ordinary outcomes (``False``), not
exceptions.  Everything below signals that a computation cannot continue.
"""


class EngineError(Exception):
    """Base class for all errors raised by the engine."""


# -- builtins ---------------------------------------------------------------

class InstantiationError(EngineError):
    """A builtin needed an argument that is not sufficiently instantiated."""


class UnboundVariable(InstantiationError):
    """An arithmetic expression contains an unbound variable."""


class UnknownOperator(EngineError):
    """An arithmetic expression uses an operator the evaluator does not know."""


class UnknownBuiltin(EngineError):
    """A goal is neither a registered builtin nor a call to the program."""


# -- parsing and validation -------------------------------------------------

class RuleSyntaxError(EngineError, SyntaxError):
    """Malformed program or goal text.  Carries 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{where}")

    def __str__(self):
        return self.args[0]


class ValidationError(EngineError):
    """A program violates the single linear direct recursion restriction."""


class MultipleRecursiveRules(ValidationError):
    pass


class NonLinearRecursion(ValidationError):
    pass


class HeadNotVariables(ValidationError):
    pass


# -- execution --------------------------------------------------------------

class NoRuleApplicable(EngineError):
    """No rule of the program (or ladder) accepts the current call."""


class StepLimitExceeded(EngineError):
    pass


class ComputationFailed(EngineError):
    """A body builtin failed after commitment: the final state is ``false``."""


class UnfoldCapExceeded(EngineError):
    pass


class TemplateMismatch(EngineError):
    """A rule handed to an unfolding scheme is not an instance of its template."""


class MatchFailure(EngineError):
    """The recursive call of a rule cannot be matched against a copy's head."""


# -- engine facade ----------------------------------------------------------

class DuplicateRegistration(EngineError):
    pass


class NotRegistered(EngineError):
    pass


class SchemeMismatch(EngineError):
    pass


class VerificationMismatch(EngineError):
    """A benchmark produced an answer that disagrees with its oracle."""
