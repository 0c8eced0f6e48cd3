"""Torsion characters of the integers over a divisibility chain.

A character at level n sends x to k*x/b_n + Z; the full character group of
interest is the union of the level-n windows.  Characters reduce to their
minimal level (k divided down through the ratios while possible), so equal
circle values compare equal no matter which level they were written at.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .circle import CircleElem, centered_mod
from .dseq import DSequence
from .errors import IncompatibleBaseError, InvalidLevelError

__all__ = ["Character", "character_window"]


@dataclass(frozen=True)
class Character:
    """k/b_level + Z acting on the integers by multiplication."""

    k: int
    level: int
    base: DSequence

    @classmethod
    def make(cls, k: int, level: int, base: DSequence) -> "Character":
        """Canonical character: k centered modulo b_level, level minimal."""
        if level < 0:
            raise InvalidLevelError(f"character level must be non-negative, got {level}")
        k = centered_mod(k, base.term(level))
        while level > 0 and k % base.ratio(level) == 0:
            k //= base.ratio(level)
            level -= 1
        return cls(k, level, base)

    @classmethod
    def zero(cls, base: DSequence) -> "Character":
        return cls(0, 0, base)

    def __call__(self, x: int) -> CircleElem:
        return CircleElem.make(self.k * x, self.base.term(self.level))

    def value(self) -> CircleElem:
        return CircleElem.make(self.k, self.base.term(self.level))

    def order(self) -> int:
        b = self.base.term(self.level)
        return b // gcd(abs(self.k), b)

    def __add__(self, other: "Character") -> "Character":
        if self.base != other.base:
            raise IncompatibleBaseError(
                f"characters over {self.base.descriptor} and {other.base.descriptor}")
        lo, hi = sorted((self, other), key=lambda c: c.level)
        lift = hi.base.term(hi.level) // lo.base.term(lo.level)
        return Character.make(lo.k * lift + hi.k, hi.level, self.base)

    def __sub__(self, other: "Character") -> "Character":
        return self + (-other)

    def __neg__(self) -> "Character":
        return Character.make(-self.k, self.level, self.base)

    @property
    def sort_key(self) -> tuple[int, int]:
        return (self.level, self.k)

    def to_json(self) -> dict:
        return {"k": self.k, "level": self.level, "value": str(self.value())}

    def __str__(self) -> str:
        return f"{self.k}/b_{self.level}"


def character_window(base: DSequence, level: int) -> tuple[Character, ...]:
    """All b_level characters whose order divides b_level, in canonical order.

    Windows are nested, and the enumeration order (level, then numerator) is
    fixed so reports are reproducible.
    """
    if level < 0:
        raise InvalidLevelError(f"window level must be non-negative, got {level}")
    b = base.term(level)
    chars = [Character.make(k, level, base) for k in range(b)]
    return tuple(sorted(chars, key=lambda c: c.sort_key))
