"""Exception hierarchy. Each class maps to one CLI exit code."""


class RedGreenError(Exception):
    exit_code = 1


class DimensionError(RedGreenError, ValueError):
    """Arity or shape mismatch between tensors or diagrams."""

    exit_code = 2


class ArgumentError(RedGreenError, ValueError):
    exit_code = 2


class ParseError(RedGreenError, ValueError):
    exit_code = 3


class DiagramError(RedGreenError, ValueError):
    """A diagram violates its structural invariants, or a port operation is ill-formed."""

    exit_code = 4

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class MatchError(RedGreenError, ValueError):
    """A rewrite site does not match the rule's left-hand side."""

    exit_code = 4


class DegenerateInputError(RedGreenError, ValueError):
    exit_code = 5


class NoWitnessError(RedGreenError, ValueError):
    exit_code = 6


class SoundnessError(RedGreenError, AssertionError):
    exit_code = 7
