"""Exact arithmetic in the rational circle group R/Z.

Elements are reduced fractions stored with the canonical representative in
(-1/2, 1/2]; a tie at one half takes the positive sign.  The closed arcs
[-1/(4m), 1/(4m)] around zero serve as the neighborhood scale, and every
comparison is an exact integer comparison.  No floating point is used
anywhere: several downstream checks sit exactly on arc boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import InvalidDenominatorError, InvalidLevelError

__all__ = ["CircleElem", "ZERO", "centered_mod"]


def centered_mod(a: int, modulus: int) -> int:
    """Residue of `a` modulo `modulus`, shifted into (-modulus/2, modulus/2]."""
    r = a % modulus
    if 2 * r > modulus:
        r -= modulus
    return r


@dataclass(frozen=True, slots=True)
class CircleElem:
    """The coset num/den + Z, reduced, with -den < 2*num <= den.

    Instances are immutable and safe to share between threads.  Use
    :meth:`make` to build one from an arbitrary fraction; the raw constructor
    insists on already-canonical fields.
    """

    num: int
    den: int

    def __post_init__(self):
        if self.den < 1:
            raise InvalidDenominatorError(f"denominator must be positive, got {self.den}")
        if gcd(abs(self.num), self.den) != 1:
            raise ValueError(f"{self.num}/{self.den} is not reduced")
        if not (-self.den < 2 * self.num <= self.den):
            raise ValueError(f"{self.num}/{self.den} is not the canonical representative")

    @classmethod
    def make(cls, num: int, den: int) -> "CircleElem":
        """Canonical element of num/den + Z."""
        if den < 1:
            raise InvalidDenominatorError(f"denominator must be positive, got {den}")
        r = centered_mod(num, den)
        g = gcd(abs(r), den)
        return cls(r // g, den // g)

    def __add__(self, other: "CircleElem") -> "CircleElem":
        return CircleElem.make(self.num * other.den + other.num * self.den,
                               self.den * other.den)

    def __sub__(self, other: "CircleElem") -> "CircleElem":
        return self + (-other)

    def __neg__(self) -> "CircleElem":
        return CircleElem.make(-self.num, self.den)

    def __mul__(self, n: int) -> "CircleElem":
        return CircleElem.make(n * self.num, self.den)

    __rmul__ = __mul__

    def in_arc(self, m: int) -> bool:
        """Whether the element lies in the closed arc [-1/(4m), 1/(4m)] + Z."""
        if m < 1:
            raise InvalidLevelError(f"arc level must be positive, got {m}")
        return 4 * m * abs(self.num) <= self.den

    def is_zero(self) -> bool:
        return self.num == 0

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


ZERO = CircleElem(0, 1)
