"""Finest-topology neighborhoods of a null divisibility chain.

A basic neighborhood is described by a slot index sequence (n_i): it collects
all sums g_1 + ... + g_k where the slot-i summand is 0 or a signed term b_j
with j >= n_i.  Membership of an integer is decided by a bounded search that
produces a checkable decomposition certificate on success and answers UNKNOWN
otherwise; a negative answer is never claimed, since arbitrarily large terms
can cancel.  For chains with a global ratio bound L, the canonical witness
set A (all j*b_M with M >= N, j up to the next ratio) lands inside the
neighborhood with certificates of at most L terms, which makes window-scale
polar computations finite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .chars import Character
from .circle import centered_mod
from .dseq import DSequence, GROWTH_BOUNDED
from .errors import InvalidLevelError, PreconditionError, SequenceExhaustedError

__all__ = [
    "GraevSpec",
    "CertTerm",
    "Certificate",
    "TailWindow",
    "tail_set",
    "VMemberResult",
    "v_member",
    "ASet",
    "build_a_set",
    "GraevPolar",
    "graev_polar_window",
    "DEFAULT_MAX_K",
    "DEFAULT_NODE_BUDGET",
]

DEFAULT_MAX_K = 8
DEFAULT_NODE_BUDGET = 1 << 21
_DECLARED_BOUND_SCAN = 33


@dataclass(frozen=True)
class GraevSpec:
    """Slot index sequence (n_i): an explicit prefix, then n_i = slope*i + intercept.

    The affine tail keeps the sequence finitely communicable; slot numbers
    start at 1 and all indices are non-negative.
    """

    prefix: tuple[int, ...] = ()
    slope: int = 1
    intercept: int = 0

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(n) for n in self.prefix))
        if any(n < 0 for n in self.prefix):
            raise ValueError(f"slot indices must be non-negative: {self.prefix}")
        if self.slope < 0:
            raise ValueError(f"slope must be non-negative, got {self.slope}")
        if self.slope * (len(self.prefix) + 1) + self.intercept < 0:
            raise ValueError("affine tail produces a negative slot index")

    def index(self, i: int) -> int:
        """n_i for slot i >= 1."""
        if i < 1:
            raise ValueError(f"slot numbers start at 1, got {i}")
        if i <= len(self.prefix):
            return self.prefix[i - 1]
        return self.slope * i + self.intercept

    def smallest_slots(self, count: int) -> tuple[tuple[int, int], ...]:
        """(slot, index) pairs carrying the `count` smallest index values.

        The affine tail is nondecreasing, so the first len(prefix) + count
        slots always contain them.  Result is sorted by slot number.
        """
        cands = [(self.index(i), i) for i in range(1, len(self.prefix) + count + 1)]
        cands.sort()
        chosen = sorted(i for _, i in cands[:count])
        return tuple((i, self.index(i)) for i in chosen)

    def to_json(self) -> dict:
        return {"prefix": list(self.prefix), "affine": [self.slope, self.intercept]}


@dataclass(frozen=True)
class TailWindow:
    """Truncation of {0} u {+-b_n : n >= start} at index `cutoff`."""

    elements: tuple[int, ...]
    start: int
    cutoff: int


def tail_set(base: DSequence, start: int, cutoff: int) -> TailWindow:
    """Signed tail terms from index `start` through `cutoff`, plus zero."""
    if start < 0:
        raise InvalidLevelError(f"start index must be non-negative, got {start}")
    if cutoff < start:
        raise ValueError(f"cutoff {cutoff} below start {start}")
    terms = [base.term(n) for n in range(start, cutoff + 1)]
    elems = sorted({0, *terms, *(-t for t in terms)})
    return TailWindow(tuple(elems), start, cutoff)


@dataclass(frozen=True)
class CertTerm:
    sign: int
    index: int
    slot: int

    def to_json(self) -> dict:
        return {"sign": self.sign, "index": self.index, "slot": self.slot}


@dataclass(frozen=True)
class Certificate:
    """Decomposition witness: x equals the signed sum of the listed terms.

    Each term occupies its own slot and its index clears that slot's floor;
    slots left out contribute zero.  `k` is the bracket depth (the largest
    slot used; 0 only for the empty certificate of x = 0).
    """

    x: int
    terms: tuple[CertTerm, ...]
    k: int

    def verify(self, base: DSequence, spec: GraevSpec) -> bool:
        slots = [t.slot for t in self.terms]
        if len(set(slots)) != len(slots):
            return False
        if not self.terms:
            return self.x == 0 and self.k == 0
        if self.k < max(slots):
            return False
        for t in self.terms:
            if t.sign not in (1, -1) or t.slot < 1 or t.index < spec.index(t.slot):
                return False
        return sum(t.sign * base.term(t.index) for t in self.terms) == self.x

    def to_json(self) -> dict:
        return {"x": self.x, "terms": [t.to_json() for t in self.terms], "k": self.k}


@dataclass(frozen=True)
class VMemberResult:
    status: str
    certificate: Certificate | None
    caps: dict = field(compare=False)
    budget_hit: bool = False

    def __bool__(self) -> bool:
        return self.status == "YES"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "caps": dict(self.caps),
            "budget_hit": self.budget_hit,
        }


def _resolve_caps(base: DSequence, spec: GraevSpec, x: int, max_k, max_index,
                  max_abs, node_budget) -> dict:
    if max_abs is None:
        max_abs = (1 << 20) * max(abs(x), 1)
    if max_index is None:
        # A term above twice the partial-sum cap can never appear, so the
        # index cap derived from max_abs loses nothing the other caps allow.
        floor = len(spec.prefix) + 16
        limit = 2 * max_abs
        j = 0
        try:
            while base.term(j + 1) <= limit:
                j += 1
        except SequenceExhaustedError:
            pass
        max_index = max(floor, j)
        if base.term_count is not None:
            max_index = min(max_index, base.term_count - 1)
    return {"max_k": max_k, "max_index": max_index, "max_abs": max_abs,
            "node_budget": node_budget}


class _Budget:
    __slots__ = ("left",)

    def __init__(self, n: int):
        self.left = n

    def spend(self) -> bool:
        self.left -= 1
        return self.left < 0


def _slot_options(base: DSequence, spec: GraevSpec, slot: int, max_index: int):
    """Options for one slot: zero first, then signed terms by increasing index."""
    opts: list[tuple[int, int, int]] = [(0, 0, 0)]  # (value, sign, index)
    lo = spec.index(slot)
    for j in range(lo, max_index + 1):
        t = base.term(j)
        opts.append((t, 1, j))
        opts.append((-t, -1, j))
    return opts


def v_member(base: DSequence, spec: GraevSpec, x: int, *,
             max_k: int = DEFAULT_MAX_K, max_index: int | None = None,
             max_abs: int | None = None,
             node_budget: int = DEFAULT_NODE_BUDGET) -> VMemberResult:
    """Bounded certified membership of x in the neighborhood V_(n_i).

    Iterative deepening over the bracket depth k, with a meet-in-the-middle
    join across the slot halves at each depth.  Enumeration order is fixed, so
    the certificate for a given input never changes.  YES answers are verified
    decompositions; UNKNOWN means the bounded search found nothing (never a
    refutation).  `node_budget` caps the total number of search steps.
    """
    if max_k < 1 or node_budget < 1:
        raise ValueError("caps must be positive")
    caps = _resolve_caps(base, spec, x, max_k, max_index, max_abs, node_budget)
    if x == 0:
        return VMemberResult("YES", Certificate(0, (), 0), caps)
    max_index = caps["max_index"]
    max_abs = caps["max_abs"]
    budget = _Budget(node_budget)

    for k in range(1, max_k + 1):
        left_slots = list(range(1, k // 2 + 1))
        right_slots = list(range(k // 2 + 1, k + 1))

        # Right half: map achievable sums to their first decomposition.
        right: dict[int, tuple[CertTerm, ...]] = {}

        def fill(pos: int, total: int, terms: tuple[CertTerm, ...]) -> bool:
            if pos == len(right_slots):
                if total not in right:
                    right[total] = terms
                return False
            for val, sign, idx in _slot_options(base, spec, right_slots[pos], max_index):
                if budget.spend():
                    return True
                s = total + val
                if abs(s) > 2 * max_abs:
                    continue
                nxt = terms + ((CertTerm(sign, idx, right_slots[pos]),) if val else ())
                if fill(pos + 1, s, nxt):
                    return True
            return False

        if fill(0, 0, ()):
            return VMemberResult("UNKNOWN", None, caps, budget_hit=True)

        found: list[Certificate] = []

        def walk(pos: int, total: int, terms: tuple[CertTerm, ...]) -> bool:
            if pos == len(left_slots):
                tail = right.get(x - total)
                if tail is not None:
                    all_terms = terms + tail
                    depth = max((t.slot for t in all_terms), default=0)
                    found.append(Certificate(x, all_terms, depth))
                    return True
                return False
            for val, sign, idx in _slot_options(base, spec, left_slots[pos], max_index):
                if budget.spend():
                    return True
                s = total + val
                if abs(s) > max_abs:
                    continue
                nxt = terms + ((CertTerm(sign, idx, left_slots[pos]),) if val else ())
                if walk(pos + 1, s, nxt):
                    return True
            return False

        hit = walk(0, 0, ())
        if found:
            cert = found[0]
            assert cert.verify(base, spec)
            return VMemberResult("YES", cert, caps)
        if hit:
            return VMemberResult("UNKNOWN", None, caps, budget_hit=True)

    return VMemberResult("UNKNOWN", None, caps, budget_hit=False)


def _global_ratio_bound(base: DSequence) -> int:
    if base.exact_bound is not None:
        return base.exact_bound
    if base.growth == GROWTH_BOUNDED:
        count = _DECLARED_BOUND_SCAN
        if base.term_count is not None:
            count = min(count, base.term_count)
        qs = base.ratios_prefix(count - 1)
        if qs:
            return max(qs)
    raise PreconditionError(
        f"{base.descriptor} carries no global ratio bound declaration")


@dataclass(frozen=True)
class ASet:
    """Witness set A inside a neighborhood, with per-element certificates.

    N is the largest of the `bound` smallest slot indices; elements are the
    multiples j*b_M (M >= N, j below the next ratio) in increasing order, each
    certified with at most `bound` terms.
    """

    N: int
    bound: int
    elements: tuple[int, ...]
    certificates: tuple[Certificate, ...]
    slots: tuple[int, ...]


def build_a_set(base: DSequence, spec: GraevSpec, count: int) -> ASet:
    """First `count` elements of the canonical witness set A, certified."""
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    bound = _global_ratio_bound(base)
    pairs = spec.smallest_slots(bound)
    slots = tuple(s for s, _ in pairs)
    n_big = max(idx for _, idx in pairs)
    elements: list[int] = []
    certs: list[Certificate] = []
    m = n_big
    while len(elements) < count:
        bm = base.term(m)
        q = base.ratio(m + 1)
        for j in range(1, q):
            if len(elements) >= count:
                break
            elements.append(j * bm)
            terms = tuple(CertTerm(1, m, slots[t]) for t in range(j))
            certs.append(Certificate(j * bm, terms, slots[j - 1]))
        m += 1
    return ASet(n_big, bound, tuple(elements), tuple(certs), slots)


@dataclass(frozen=True)
class GraevPolar:
    """Window-scale over-approximation of the neighborhood's polar.

    Characters in the level-M window sending the first `count` elements of A
    into the closed quarter arc.  Growing `count` shrinks the set; in the
    limit it is exactly the level-N window.
    """

    characters: tuple[Character, ...]
    N: int
    window_level: int
    count: int


def graev_polar_window(base: DSequence, spec: GraevSpec, window_level: int,
                       count: int) -> GraevPolar:
    if window_level < 0:
        raise InvalidLevelError(
            f"window level must be non-negative, got {window_level}")
    aset = build_a_set(base, spec, count)
    bm = base.term(window_level)
    kept = [k for k in range(bm)
            if all(4 * abs(centered_mod(k * a, bm)) <= bm for a in aset.elements)]
    chars = sorted((Character.make(k, window_level, base) for k in kept),
                   key=lambda c: c.sort_key)
    return GraevPolar(tuple(chars), aset.N, window_level, count)
