"""Decidable membership predicates for the neighborhood bases.

Three families: the linear (adic) neighborhoods b_n * Z, the neighborhoods of
uniform convergence on the circle points 1/c_j, and finite intersections of
the latter (the basic neighborhoods of a supremum over a family of
subsequences).  Uniform-convergence membership is decided exactly: terms
c_j > 4*m*|x| pass automatically, so only a finite prefix is ever checked.
Convergence itself is a tail property, so the certificate here is explicitly
prefix-scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .circle import centered_mod
from .dseq import DSequence
from .errors import InvalidLevelError, NotASubsequenceError, SequenceExhaustedError

__all__ = [
    "lambda_member",
    "tau_member",
    "tau_check",
    "TauCheck",
    "gamma_member",
    "gamma_check",
    "GammaCheck",
    "null_prefix_certificate",
    "PrefixCertificate",
    "NeighborhoodSpec",
]


def lambda_member(base: DSequence, level: int, x: int) -> bool:
    """Whether x lies in the adic neighborhood b_level * Z."""
    if level < 0:
        raise InvalidLevelError(f"level must be non-negative, got {level}")
    return x % base.term(level) == 0


@dataclass(frozen=True)
class TauCheck:
    """Audit record for one uniform-convergence membership decision.

    `cutoff_index` is the last sequence index that needed an explicit check
    (every later term exceeds 4*m*|x| and passes automatically).  When the
    sequence is finite and ends before the cutoff, `exhausted` is set and the
    verdict covers exactly the existing terms.
    """

    member: bool
    m: int
    x: int
    bound: int
    cutoff_index: int
    violation_index: int | None
    exhausted: bool

    def __bool__(self) -> bool:
        return self.member

    def to_json(self) -> dict:
        return {
            "member": self.member,
            "m": self.m,
            "x": self.x,
            "cutoff_bound": self.bound,
            "cutoff_index": self.cutoff_index,
            "violation_index": self.violation_index,
            "exhausted": self.exhausted,
        }


def tau_check(c: DSequence, m: int, x: int) -> TauCheck:
    """Exact membership of x in the level-m uniform neighborhood over c.

    x belongs iff x/c_j + Z stays within the closed arc of radius 1/(4m) for
    every j.  For c_j > 4*m*|x| the representative is x/c_j itself and is
    strictly inside the arc, hence the finite cutoff.
    """
    if m < 1:
        raise InvalidLevelError(f"level must be positive, got {m}")
    if x == 0:
        return TauCheck(True, m, x, 0, -1, None, False)
    bound = 4 * m * abs(x)
    j = 0
    last = -1
    exhausted = False
    while True:
        try:
            t = c.term(j)
        except SequenceExhaustedError:
            exhausted = True
            break
        if t > bound:
            break
        last = j
        if 4 * m * abs(centered_mod(x, t)) > t:
            return TauCheck(False, m, x, bound, j, j, exhausted)
        j += 1
    return TauCheck(True, m, x, bound, last, None, exhausted)


def tau_member(c: DSequence, m: int, x: int) -> bool:
    return tau_check(c, m, x).member


@dataclass(frozen=True)
class GammaCheck:
    member: bool
    components: tuple[TauCheck, ...]

    def __bool__(self) -> bool:
        return self.member


def gamma_check(family: Sequence[tuple[DSequence, int]], x: int) -> GammaCheck:
    """Membership in a finite intersection of uniform neighborhoods.

    The supremum topology over all admissible subsequences is approximated
    only through such finite families; no claim is made beyond them.
    """
    if not family:
        raise ValueError("family must be non-empty")
    checks = tuple(tau_check(c, m, x) for c, m in family)
    return GammaCheck(all(ch.member for ch in checks), checks)


def gamma_member(family: Sequence[tuple[DSequence, int]], x: int) -> bool:
    return gamma_check(family, x).member


@dataclass(frozen=True)
class PrefixCertificate:
    """Eventual-divisibility certificate over a finite prefix.

    ok means: from position `start` on, every listed value is divisible by
    b_level.  This certifies null behaviour on the prefix only, never in the
    tail.
    """

    ok: bool
    start: int | None
    last_violation: int | None
    level: int
    horizon: int

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "start": self.start,
            "last_violation": self.last_violation,
            "level": self.level,
            "horizon": self.horizon,
        }


def null_prefix_certificate(base: DSequence, xs: Sequence[int], level: int) -> PrefixCertificate:
    """Least M with b_level | x_m for all m >= M inside the prefix.

    Fails (with the latest violating position) when the final element itself
    violates, i.e. when no non-empty certified tail exists.
    """
    if level < 0:
        raise InvalidLevelError(f"level must be non-negative, got {level}")
    b = base.term(level)
    last_viol = None
    for i, x in enumerate(xs):
        if x % b != 0:
            last_viol = i
    n = len(xs)
    if last_viol is None:
        return PrefixCertificate(True, 0, None, level, n)
    if last_viol == n - 1:
        return PrefixCertificate(False, None, last_viol, level, n)
    return PrefixCertificate(True, last_viol + 1, last_viol, level, n)


def _require_subsequence(c: DSequence, base: DSequence, check_terms: int) -> None:
    # Both chains increase, so one forward scan over the base suffices.
    i = 0
    for j in range(check_terms):
        try:
            t = c.term(j)
        except SequenceExhaustedError:
            return
        while base.term(i) < t:
            i += 1
        if base.term(i) != t:
            raise NotASubsequenceError(
                f"term {t} of {c.descriptor} does not occur in {base.descriptor}")


@dataclass(frozen=True)
class NeighborhoodSpec:
    """One basic neighborhood of zero, in any of the three families.

    Uniform and family components must be subsequences of the base; this is
    checked term-by-term at construction up to `check_terms` positions.
    """

    kind: str
    base: DSequence
    level: int | None = None
    seq: DSequence | None = None
    m: int | None = None
    family: tuple[tuple[DSequence, int], ...] = ()

    @classmethod
    def adic(cls, base: DSequence, level: int) -> "NeighborhoodSpec":
        if level < 0:
            raise InvalidLevelError(f"level must be non-negative, got {level}")
        return cls("lambda", base, level=level)

    @classmethod
    def uniform(cls, base: DSequence, seq: DSequence, m: int,
                check_terms: int = 12) -> "NeighborhoodSpec":
        if m < 1:
            raise InvalidLevelError(f"level must be positive, got {m}")
        _require_subsequence(seq, base, check_terms)
        return cls("tau", base, seq=seq, m=m)

    @classmethod
    def sup_family(cls, base: DSequence, family: Sequence[tuple[DSequence, int]],
                   check_terms: int = 12) -> "NeighborhoodSpec":
        if not family:
            raise ValueError("family must be non-empty")
        for seq, m in family:
            if m < 1:
                raise InvalidLevelError(f"level must be positive, got {m}")
            _require_subsequence(seq, base, check_terms)
        return cls("gamma", base, family=tuple(family))

    def member(self, x: int) -> bool:
        if self.kind == "lambda":
            return lambda_member(self.base, self.level, x)
        if self.kind == "tau":
            return tau_member(self.seq, self.m, x)
        return gamma_member(self.family, x)

    def __contains__(self, x: int) -> bool:
        return self.member(x)
