"""Divisibility chains b_0 = 1 | b_1 | b_2 | ... and balanced digit expansions.

A chain is driven by a ratio source: every ratio q_n = b_n / b_{n-1} is an
integer >= 2, so each term properly divides the next.  Tail behaviour
(bounded ratios, ratios going to infinity) is undecidable from any finite
prefix, so it is carried as an explicit declared tag; predicates report
prefix-scale verdicts and only promote them to global claims when the tag
says so.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .circle import centered_mod
from .errors import (
    InvalidExpansionError,
    InvalidIndicesError,
    MalformedSequenceError,
    SequenceExhaustedError,
    SpecParseError,
)

__all__ = [
    "DSequence",
    "DigitExpansion",
    "RatioBound",
    "BlockGrowth",
    "expansion_value",
    "parse_spec",
    "GROWTH_BOUNDED",
    "GROWTH_RATIO_TO_INF",
    "GROWTH_BLOCK_TO_INF",
]

GROWTH_BOUNDED = "bounded"
GROWTH_RATIO_TO_INF = "dinf"
GROWTH_BLOCK_TO_INF = "dinf-l"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class RatioBound:
    """Verdict of a bounded-ratios check over a term prefix.

    `bound` is filled in only when it is global: either derived exactly from
    a cyclic ratio source, or promised by a declared growth tag.
    """

    prefix_max: int | None
    bound: int | None
    checked_terms: int


@dataclass(frozen=True)
class BlockGrowth:
    """Prefix verdict for b_{n+ell}/b_n >= threshold on a tail.

    `asymptotic` reports the declared limit behaviour (True/False) or None
    when the tag does not settle it; the numeric fields are prefix facts.
    """

    holds_on_tail: bool
    tail_start: int | None
    checked_terms: int
    asymptotic: bool | None


class DSequence:
    """Lazily extended divisibility chain with cached prefix.

    The cached prefix never changes once computed; extension happens under a
    lock, so concurrent readers of already-computed terms are safe.  Equality
    and hashing go through the descriptor string, which pins the ratio source.
    """

    def __init__(
        self,
        ratio_fn: Callable[[int], int],
        *,
        descriptor: str,
        term_count: int | None = None,
        growth: str | None = None,
        block_len: int | None = None,
        basic: bool | None = None,
        exact_bound: int | None = None,
        nontwo_tail: bool | None = None,
    ):
        self._ratio_fn = ratio_fn
        self._terms: list[int] = [1]
        self._ratios: list[int] = []
        self._lock = threading.Lock()
        self.descriptor = descriptor
        self.term_count = term_count
        self.growth = growth
        self.block_len = block_len
        self.basic = basic
        self.exact_bound = exact_bound
        self.nontwo_tail = nontwo_tail

    # -- construction ------------------------------------------------------

    @classmethod
    def factorial(cls) -> "DSequence":
        """1, 2, 6, 24, 120, ... (ratios 2, 3, 4, ...)."""
        return cls(lambda i: i + 1, descriptor="factorial",
                   growth=GROWTH_RATIO_TO_INF, basic=False, nontwo_tail=True)

    @classmethod
    def powers(cls, k: int) -> "DSequence":
        """1, k, k^2, ... with the constant ratio k >= 2."""
        if k < 2:
            raise MalformedSequenceError(f"power base must be at least 2, got {k}")
        return cls(lambda i: k, descriptor=f"pow:{k}", growth=GROWTH_BOUNDED,
                   basic=_is_prime(k), exact_bound=k, nontwo_tail=(k != 2))

    @classmethod
    def primorial(cls) -> "DSequence":
        """1, 2, 6, 30, 210, ... (ratios run through the primes)."""
        primes: list[int] = []

        def nth_prime(i: int) -> int:
            while len(primes) < i:
                c = primes[-1] + 1 if primes else 2
                while not _is_prime(c):
                    c += 1
                primes.append(c)
            return primes[i - 1]

        return cls(nth_prime, descriptor="primorial",
                   growth=GROWTH_RATIO_TO_INF, basic=True, nontwo_tail=True)

    @classmethod
    def from_ratios(cls, ratios: Iterable[int], repeat: bool = False) -> "DSequence":
        """Chain with an explicit ratio list, optionally cycled forever."""
        rs = tuple(int(q) for q in ratios)
        if not rs:
            raise MalformedSequenceError("ratio list is empty")
        for q in rs:
            if q < 2:
                raise MalformedSequenceError(f"ratio {q} is smaller than 2")
        desc = "ratios:" + ",".join(str(q) for q in rs) + (";repeat" if repeat else "")
        if repeat:
            return cls(lambda i: rs[(i - 1) % len(rs)], descriptor=desc,
                       growth=GROWTH_BOUNDED, basic=all(_is_prime(q) for q in rs),
                       exact_bound=max(rs), nontwo_tail=any(q != 2 for q in rs))
        return cls(lambda i: rs[i - 1], descriptor=desc, term_count=len(rs) + 1,
                   basic=all(_is_prime(q) for q in rs), exact_bound=max(rs))

    def subsequence(self, indices: Sequence[int]) -> "DSequence":
        """Finite chain made of the terms at the given indices.

        Indices must be strictly increasing; 0 is prepended when missing so
        the result starts at 1 again.  The ratios of the result are the
        products of the skipped ratios.
        """
        idx = [int(i) for i in indices]
        if any(i < 0 for i in idx):
            raise InvalidIndicesError(f"indices must be non-negative: {idx}")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise InvalidIndicesError(f"indices must be strictly increasing: {idx}")
        if not idx or idx[0] != 0:
            idx = [0] + idx
        terms = [self.term(i) for i in idx]
        rs = tuple(terms[j] // terms[j - 1] for j in range(1, len(terms)))
        desc = f"sub({self.descriptor};{','.join(str(i) for i in idx)})"
        return DSequence((lambda i: rs[i - 1]), descriptor=desc, term_count=len(idx),
                         basic=all(_is_prime(q) for q in rs) if rs else None,
                         exact_bound=max(rs) if rs else None)

    # -- terms and ratios ----------------------------------------------------

    def term(self, n: int) -> int:
        if n < 0:
            raise ValueError(f"term index must be non-negative, got {n}")
        if self.term_count is not None and n >= self.term_count:
            raise SequenceExhaustedError(
                f"{self.descriptor} has only {self.term_count} terms")
        if n < len(self._terms):
            return self._terms[n]
        with self._lock:
            while len(self._terms) <= n:
                i = len(self._ratios) + 1
                q = self._ratio_fn(i)
                if q < 2:
                    raise MalformedSequenceError(f"ratio q_{i} = {q} is smaller than 2")
                self._ratios.append(q)
                self._terms.append(self._terms[-1] * q)
        return self._terms[n]

    def ratio(self, n: int) -> int:
        """q_n = b_n / b_{n-1}, for n >= 1."""
        if n < 1:
            raise ValueError(f"ratio index must be positive, got {n}")
        self.term(n)
        return self._ratios[n - 1]

    def terms_prefix(self, count: int) -> tuple[int, ...]:
        """b_0 .. b_{count-1}."""
        if count < 1:
            return ()
        self.term(count - 1)
        return tuple(self._terms[:count])

    def ratios_prefix(self, count: int) -> tuple[int, ...]:
        """q_1 .. q_count."""
        if count < 1:
            return ()
        self.term(count)
        return tuple(self._ratios[:count])

    @property
    def is_finite(self) -> bool:
        return self.term_count is not None

    def _clamp_ratio_count(self, upto: int) -> int:
        count = upto - 1
        if self.term_count is not None:
            count = min(count, self.term_count - 1)
        return count

    # -- predicates ----------------------------------------------------------

    def has_bounded_ratios(self, upto: int) -> RatioBound:
        """Max ratio among the first `upto` terms; global bound when declared."""
        if upto < 1:
            raise ValueError(f"upto must be at least 1, got {upto}")
        qs = self.ratios_prefix(self._clamp_ratio_count(upto))
        pmax = max(qs) if qs else None
        if self.exact_bound is not None:
            return RatioBound(pmax, self.exact_bound, upto)
        if self.growth == GROWTH_BOUNDED:
            return RatioBound(pmax, pmax, upto)
        return RatioBound(pmax, None, upto)

    def is_basic(self, upto: int) -> bool:
        """Whether every ratio among the first `upto` terms is prime."""
        if upto < 1:
            raise ValueError(f"upto must be at least 1, got {upto}")
        qs = self.ratios_prefix(self._clamp_ratio_count(upto))
        return all(_is_prime(q) for q in qs)

    def block_growth(self, ell: int, threshold: int, upto: int) -> BlockGrowth:
        """Check b_{n+ell}/b_n >= threshold on the tail of the first `upto` terms."""
        if ell < 1:
            raise ValueError(f"block length must be at least 1, got {ell}")
        if upto < 1:
            raise ValueError(f"upto must be at least 1, got {upto}")
        top = upto - 1
        if self.term_count is not None:
            top = min(top, self.term_count - 1)
        last = top - ell
        asym = self._asymptotic_block(ell)
        if last < 0:
            return BlockGrowth(False, None, upto, asym)
        viol = None
        for n in range(last + 1):
            if self.term(n + ell) < threshold * self.term(n):
                viol = n
        start = 0 if viol is None else viol + 1
        if start > last:
            return BlockGrowth(False, None, upto, asym)
        return BlockGrowth(True, start, upto, asym)

    def _asymptotic_block(self, ell: int) -> bool | None:
        if self.growth == GROWTH_RATIO_TO_INF:
            return True
        if self.growth == GROWTH_BLOCK_TO_INF:
            if self.block_len is not None and ell >= self.block_len:
                return True
            return None
        if self.growth == GROWTH_BOUNDED:
            return False
        return None

    # -- expansions ------------------------------------------------------------

    def expand(self, value: int) -> "DigitExpansion":
        """Balanced digit expansion of an integer over this chain.

        Digit j is the residue of the running remainder modulo q_{j+1},
        shifted into (-q_{j+1}/2, q_{j+1}/2] (a tie resolves to +q/2), and the
        remainder is divided down.  The loop stops when the remainder hits
        zero, so the trailing digit is never zero and the expansion of 0 is
        empty.
        """
        digits: list[int] = []
        r = value
        if r:
            # |remainder| at least halves per step, so this many ratios suffice
            need = abs(value).bit_length() + 1
            if self.term_count is not None:
                need = min(need, self.term_count - 1)
            self.term(need)
        qs = self._ratios
        j = 0
        while r:
            q = qs[j] if j < len(qs) else self.ratio(j + 1)
            if r == -1 and q == 2 and self.nontwo_tail is False:
                # the only non-terminating state: -1 through an all-2 tail;
                # a final signed digit is the unique finite way out
                digits.append(-1)
                break
            k = r % q
            if 2 * k > q:
                k -= q
            digits.append(k)
            r = (r - k) // q
            j += 1
        return DigitExpansion(tuple(digits), self)

    # -- identity ---------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, DSequence):
            return NotImplemented
        return self.descriptor == other.descriptor

    def __hash__(self) -> int:
        return hash(self.descriptor)

    def __repr__(self) -> str:
        return f"DSequence({self.descriptor!r})"


@dataclass(frozen=True)
class DigitExpansion:
    """Balanced digit list k_0..k_N, digit j weighted by b_j.

    Digit j lies in (-q_{j+1}/2, q_{j+1}/2] and the trailing digit is nonzero
    (zero expands to the empty list); both are enforced at construction, with
    one carve-out: the final digit may equal -q/2, which is the only finite
    way to reach negative integers over an all-2 ratio tail.  The centered
    partial-sum bound 2*|sum_{j<=n} k_j b_j| <= b_{n+1} is reported, not
    enforced: a positive tie at an even ratio can push a partial sum above
    it, and no alternative digit choice exists (value 9 over the repeating
    ratios 2,3 is the smallest such case; see half_bound_violations).
    """

    digits: tuple[int, ...]
    base: DSequence

    def __post_init__(self):
        if self.digits and self.digits[-1] == 0:
            raise InvalidExpansionError("trailing digit must be nonzero")
        qs = self.base.ratios_prefix(len(self.digits))
        last = len(self.digits) - 1
        for j, (k, q) in enumerate(zip(self.digits, qs)):
            if not (-q < 2 * k <= q):
                # the final digit alone may sit at -q/2: over an all-2 tail
                # negative integers have no expansion otherwise
                if j == last and 2 * k == -q:
                    continue
                raise InvalidExpansionError(
                    f"digit k_{j} = {k} outside (-{q}/2, {q}/2]")

    def value(self) -> int:
        bs = self.base.terms_prefix(len(self.digits))
        return sum(k * b for k, b in zip(self.digits, bs))

    def partial_sums(self) -> tuple[int, ...]:
        out = []
        s = 0
        for k, b in zip(self.digits, self.base.terms_prefix(len(self.digits))):
            s += k * b
            out.append(s)
        return tuple(out)

    def half_bound_violations(self) -> tuple[int, ...]:
        """Positions n with 2*|sum_{j<=n} k_j b_j| > b_{n+1}."""
        if not self.digits:
            return ()
        bs = self.base.terms_prefix(len(self.digits) + 1)
        out = []
        s = 0
        for n, k in enumerate(self.digits):
            s += k * bs[n]
            if 2 * abs(s) > bs[n + 1]:
                out.append(n)
        return tuple(out)

    @property
    def half_bound_ok(self) -> bool:
        return not self.half_bound_violations()

    @property
    def unique(self) -> bool | None:
        """Whether the base is known to keep balanced expansions unique.

        True when some ratio other than 2 recurs forever (the standing
        hypothesis for uniqueness), False for an all-2 tail, None when the
        tail is not declared.
        """
        return self.base.nontwo_tail

    def to_json(self) -> dict:
        return {
            "digits": list(self.digits),
            "base": self.base.descriptor,
            "half_bound_ok": self.half_bound_ok,
            "unique_base": self.unique,
        }


def expansion_value(base: DSequence, digits: Iterable[int]) -> int:
    """Validate a digit list against the base and return its integer value."""
    return DigitExpansion(tuple(int(k) for k in digits), base).value()


# -- spec grammar ---------------------------------------------------------------

_GRAMMAR = "factorial | primorial | pow:<k> | ratios:<q1>,<q2>,...[;repeat]"


def parse_spec(text: str) -> DSequence:
    """Parse a sequence spec string.

    Grammar: a head (``factorial``, ``primorial``, ``pow:<k>`` or
    ``ratios:<q1>,<q2>,...[;repeat]``) followed by optional whitespace-separated
    flags ``growth=bounded|dinf|dinf-l:<ell>`` and ``basic``.
    """
    tokens = text.split()
    if not tokens:
        raise SpecParseError("empty sequence spec", 0)
    seq = _parse_head(tokens[0])
    for tok in tokens[1:]:
        pos = text.index(tok)
        if tok == "basic":
            seq.basic = True
        elif tok.startswith("growth="):
            _apply_growth(seq, tok[len("growth="):], pos)
        else:
            raise SpecParseError(f"unknown flag {tok!r}", pos)
    return seq


def _apply_growth(seq: DSequence, val: str, pos: int) -> None:
    if val == "bounded":
        seq.growth = GROWTH_BOUNDED
    elif val == "dinf":
        seq.growth = GROWTH_RATIO_TO_INF
    elif val.startswith("dinf-l:"):
        try:
            ell = int(val[len("dinf-l:"):])
        except ValueError:
            raise SpecParseError(f"bad block length in {val!r}", pos) from None
        if ell < 1:
            raise SpecParseError(f"block length must be positive in {val!r}", pos)
        seq.growth = GROWTH_BLOCK_TO_INF
        seq.block_len = ell
    else:
        raise SpecParseError(f"unknown growth class {val!r}", pos)


def _parse_head(head: str) -> DSequence:
    if head == "factorial":
        return DSequence.factorial()
    if head == "primorial":
        return DSequence.primorial()
    if head.startswith("pow:"):
        body = head[len("pow:"):]
        try:
            k = int(body)
        except ValueError:
            raise SpecParseError(f"bad power base {body!r}", len("pow:")) from None
        return DSequence.powers(k)
    if head.startswith("ratios:"):
        body = head[len("ratios:"):]
        parts = body.split(";")
        if len(parts) == 2 and parts[1] == "repeat":
            repeat = True
        elif len(parts) == 1:
            repeat = False
        else:
            raise SpecParseError(f"bad ratios suffix in {body!r}", len("ratios:"))
        items = parts[0].split(",") if parts[0] else []
        ratios = []
        for item in items:
            try:
                ratios.append(int(item))
            except ValueError:
                raise SpecParseError(
                    f"bad ratio {item!r}", len("ratios:") + parts[0].index(item)) from None
        return DSequence.from_ratios(ratios, repeat=repeat)
    raise SpecParseError(f"unknown sequence spec {head!r}; expected {_GRAMMAR}", 0)
