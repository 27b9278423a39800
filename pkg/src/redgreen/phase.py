"""Spider colours and phases.

A phase is stored as an exact rational multiple of pi whenever possible, so that
angle conditions like ``a + b == pi (mod 2 pi)`` are decided exactly. Anything
built from a float degrades to a plain radian value.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from redgreen.errors import ParseError

ANGLE_TOL = 1e-12

_EXACT_UNITS = {
    Fraction(0): 1 + 0j,
    Fraction(1, 2): 1j,
    Fraction(1): -1 + 0j,
    Fraction(3, 2): -1j,
}


class Color(enum.Enum):
    Z = "Z"
    X = "X"

    @property
    def other(self) -> "Color":
        return Color.X if self is Color.Z else Color.Z

    @property
    def display(self) -> str:
        return "green" if self is Color.Z else "red"

    @classmethod
    def parse(cls, text: str) -> "Color":
        try:
            return cls(text.strip().upper())
        except ValueError:
            raise ParseError(f"unknown colour {text!r}") from None


PhaseLike = Union["Phase", Fraction, int, str]


@dataclass(frozen=True)
class Phase:
    """A phase in [0, 2 pi).

    ``multiple`` holds the value as a reduced fraction of pi when exact,
    otherwise it is None and ``_radians`` carries the float value.
    """

    multiple: Optional[Fraction] = Fraction(0)
    _radians: Optional[float] = None

    def __post_init__(self):
        if self.multiple is not None:
            m = Fraction(self.multiple) % 2
            object.__setattr__(self, "multiple", m)
            object.__setattr__(self, "_radians", None)
        else:
            if self._radians is None or not math.isfinite(self._radians):
                raise ValueError("irrational phase needs a finite radian value")
            object.__setattr__(self, "_radians", math.fmod(self._radians, 2 * math.pi) % (2 * math.pi))

    @classmethod
    def pi_frac(cls, num: int, den: int = 1) -> "Phase":
        return cls(Fraction(num, den))

    @classmethod
    def from_radians(cls, rad: float) -> "Phase":
        return cls(None, float(rad))

    @classmethod
    def coerce(cls, value: PhaseLike) -> "Phase":
        if isinstance(value, Phase):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        if isinstance(value, (int, Fraction)):
            return cls(Fraction(value))
        raise TypeError(f"cannot make a phase from {value!r}")

    @classmethod
    def parse(cls, text: str) -> "Phase":
        """Parse ``p/q`` (meaning p*pi/q), an integer multiple of pi, or ``rad:<float>``."""
        s = text.strip()
        try:
            if s.startswith("rad:"):
                return cls.from_radians(float(s[4:]))
            return cls(Fraction(s))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad phase {text!r}") from None

    @property
    def exact(self) -> bool:
        return self.multiple is not None

    @property
    def radians(self) -> float:
        if self.multiple is not None:
            return math.pi * float(self.multiple)
        return self._radians

    def unit(self) -> complex:
        """e^{i phase}; exact for multiples of pi/2."""
        if self.multiple is not None and self.multiple in _EXACT_UNITS:
            return _EXACT_UNITS[self.multiple]
        return cmath.exp(1j * self.radians)

    @classmethod
    def _ratio(cls, num: int, den: int) -> "Phase":
        """Exact phase num/den * pi, reduced with integer arithmetic (hot path of phase sums)."""
        num %= 2 * den
        g = math.gcd(num, den)
        p = object.__new__(cls)
        object.__setattr__(p, "multiple", Fraction(num // g, den // g))
        object.__setattr__(p, "_radians", None)
        return p

    def __add__(self, other: PhaseLike) -> "Phase":
        other = Phase.coerce(other)
        a, b = self.multiple, other.multiple
        if a is not None and b is not None:
            return Phase._ratio(
                a.numerator * b.denominator + b.numerator * a.denominator, a.denominator * b.denominator
            )
        return Phase.from_radians(self.radians + other.radians)

    __radd__ = __add__

    def __neg__(self) -> "Phase":
        if self.exact:
            return Phase._ratio(-self.multiple.numerator, self.multiple.denominator)
        return Phase.from_radians(-self.radians)

    def __sub__(self, other: PhaseLike) -> "Phase":
        return self + (-Phase.coerce(other))

    def __rsub__(self, other: PhaseLike) -> "Phase":
        return Phase.coerce(other) - self

    def congruent(self, other: PhaseLike, tol: float = ANGLE_TOL) -> bool:
        """Equality mod 2 pi; exact when both sides are rational."""
        other = Phase.coerce(other)
        if self.exact and other.exact:
            return self.multiple == other.multiple
        d = (self.radians - other.radians) % (2 * math.pi)
        return min(d, 2 * math.pi - d) <= tol

    def is_zero(self) -> bool:
        return self.multiple == 0 if self.exact else self.congruent(ZERO)

    def is_pi(self) -> bool:
        return self.multiple == 1 if self.exact else self.congruent(PI)

    def __str__(self) -> str:
        if self.multiple is None:
            return f"rad:{self._radians!r}"
        m = self.multiple
        return str(m.numerator) if m.denominator == 1 else f"{m.numerator}/{m.denominator}"

    def __repr__(self) -> str:
        return f"Phase({self})"


ZERO = Phase(Fraction(0))
PI = Phase(Fraction(1))
