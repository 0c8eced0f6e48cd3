"""Polar and quasi-convex-hull computation, the sequence killer, and
exhaustive desk-scale verifiers for the circle lemmas.

Hulls are always relative to a character window (level M) and an integer
range [-R, R]; both parameters are echoed in every result because the full
dual is not finitely computable.  The verifiers enumerate their entire
hypothesis space, so a PASS is a complete proof for the swept bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .chars import Character, character_window
from .circle import CircleElem, centered_mod
from .dseq import DSequence
from .errors import HorizonError, InvalidLevelError, PreconditionError
from .graev import GraevSpec, graev_polar_window, _global_ratio_bound
from .topo import null_prefix_certificate, tau_check

__all__ = [
    "polar_window",
    "qc_hull_window",
    "is_quasiconvex_window",
    "QuasiConvexity",
    "KillRound",
    "KillReport",
    "kill_sequence",
    "Lemma1Sweep",
    "verify_lemma1",
    "ChainSweep",
    "verify_lemma_chain",
    "LqcModReport",
    "verify_lqc_modification",
]


# -- polars and hulls --------------------------------------------------------


def _polar_numerators(points: Sequence[int], b: int) -> list[int]:
    return [k for k in range(b)
            if all(4 * abs(centered_mod(k * s, b)) <= b for s in points)]


def polar_window(points: Iterable[int], base: DSequence, window_level: int,
                 ) -> tuple[Character, ...]:
    """Characters of the level-M window sending every point into the quarter arc."""
    if window_level < 0:
        raise InvalidLevelError(f"window level must be non-negative, got {window_level}")
    pts = sorted(set(int(s) for s in points))
    b = base.term(window_level)
    kept = _polar_numerators(pts, b)
    return tuple(sorted((Character.make(k, window_level, base) for k in kept),
                        key=lambda c: c.sort_key))


def qc_hull_window(points: Iterable[int], base: DSequence, window_level: int,
                   radius: int) -> tuple[int, ...]:
    """Bipolar-style hull of a finite set, relative to window and range.

    Contains every x in [-radius, radius] that no polar character separates
    from the set; always a superset of the input.  Larger windows shrink it.
    """
    if radius < 1:
        raise ValueError(f"radius must be positive, got {radius}")
    pts = sorted(set(int(s) for s in points))
    if pts and (pts[0] < -radius or pts[-1] > radius):
        raise ValueError(f"set must lie within [-{radius}, {radius}]")
    b = base.term(window_level)
    kept = _polar_numerators(pts, b)
    return tuple(x for x in range(-radius, radius + 1)
                 if all(4 * abs(centered_mod(k * x, b)) <= b for k in kept))


@dataclass(frozen=True)
class QuasiConvexity:
    """Window-relative quasi-convexity verdict.

    When the set equals its hull, `separators` maps every excluded in-range
    point to a character witnessing the exclusion; otherwise `witness` is a
    hull point outside the set.
    """

    quasiconvex: bool
    hull: tuple[int, ...]
    window_level: int
    radius: int
    witness: int | None
    separators: tuple[tuple[int, Character], ...] | None

    def __bool__(self) -> bool:
        return self.quasiconvex


def is_quasiconvex_window(points: Iterable[int], base: DSequence,
                          window_level: int, radius: int) -> QuasiConvexity:
    pts = sorted(set(int(s) for s in points))
    hull = qc_hull_window(pts, base, window_level, radius)
    if list(hull) != pts:
        witness = next(x for x in hull if x not in set(pts))
        return QuasiConvexity(False, hull, window_level, radius, witness, None)
    b = base.term(window_level)
    kept = _polar_numerators(pts, b)
    seps = []
    member = set(pts)
    for x in range(-radius, radius + 1):
        if x in member:
            continue
        k = next(k for k in kept if 4 * abs(centered_mod(k * x, b)) > b)
        seps.append((x, Character.make(k, window_level, base)))
    return QuasiConvexity(True, hull, window_level, radius, None, tuple(seps))


# -- the sequence killer -------------------------------------------------------


@dataclass(frozen=True)
class KillRound:
    n: int
    m: int
    witness: CircleElem

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "witness": str(self.witness)}


@dataclass(frozen=True)
class KillReport:
    """Output of the killer: one witness per round and the extracted chain.

    Round j pins (n_j, m_j) with b_{n_j} dividing x_{m_j} but b_{n_j+1} not;
    the witness x_{m_j}/b_{n_j+1} + Z then sits outside the arc of radius
    1/(4L).  Gaps satisfy n_{j+1} - n_j > j, so the extracted chain c =
    (b_{n_j+1}) has block ratios at least 2^(j+1).
    """

    rounds: tuple[KillRound, ...]
    c: DSequence
    bound: int
    xs: tuple[int, ...]
    base_descriptor: str
    xs_descriptor: str
    horizon: int

    def selfcheck(self, base: DSequence) -> list[str]:
        """Re-derive every invariant; empty list means sound."""
        issues: list[str] = []
        for pos, rnd in enumerate(self.rounds):
            j = pos + 1
            x = self.xs[rnd.m - 1]
            if x % base.term(rnd.n) != 0:
                issues.append(f"round {j}: b_{rnd.n} does not divide x_{rnd.m}")
            if x % base.term(rnd.n + 1) == 0:
                issues.append(f"round {j}: b_{rnd.n + 1} divides x_{rnd.m}")
            if CircleElem.make(x, base.term(rnd.n + 1)) != rnd.witness:
                issues.append(f"round {j}: witness mismatch")
            digits = base.expand(x).digits
            lead = next((i for i, k in enumerate(digits) if k), None)
            if lead != rnd.n:
                issues.append(f"round {j}: leading digit at {lead}, expected {rnd.n}")
            elif CircleElem.make(digits[rnd.n], base.ratio(rnd.n + 1)) != rnd.witness:
                issues.append(f"round {j}: digit argument disagrees with witness")
            if rnd.witness.in_arc(self.bound):
                issues.append(f"round {j}: witness inside the level-{self.bound} arc")
            if tau_check(self.c, self.bound, x).member:
                issues.append(f"round {j}: x_{rnd.m} not separated by the extracted chain")
            if pos + 1 < len(self.rounds):
                gap = self.rounds[pos + 1].n - rnd.n
                if gap <= j:
                    issues.append(f"rounds {j},{j + 1}: gap {gap} not greater than {j}")
            if self.c.term(j) != base.term(rnd.n + 1):
                issues.append(f"round {j}: extracted chain term mismatch")
        return issues

    def to_json(self) -> dict:
        return {
            "rounds": [r.to_json() for r in self.rounds],
            "c": [self.c.term(i) for i in range(self.c.term_count)],
            "bound": self.bound,
            "base": self.base_descriptor,
            "xs": self.xs_descriptor,
            "horizon": self.horizon,
        }


def _validate_killer_inputs(base: DSequence, xs: tuple[int, ...], levels: int) -> int:
    if base.is_finite:
        raise PreconditionError("killer needs an unbounded base chain")
    if base.basic is not True:
        raise PreconditionError(f"{base.descriptor} is not declared basic")
    bound = _global_ratio_bound(base)
    horizon = len(xs)
    if not base.is_basic(horizon + 2):
        raise PreconditionError(
            f"{base.descriptor} declared basic but a checked ratio is composite")
    if len(set(xs)) < 2:
        raise PreconditionError("sequence prefix is constant; nothing to kill")
    for level in range(1, levels + 1):
        cert = null_prefix_certificate(base, xs, level)
        if not cert:
            raise PreconditionError(
                f"prefix not null at level {level} (violation at {cert.last_violation})")
    return bound


def kill_sequence(base: DSequence, xs: Sequence[int] | str, rounds: int, *,
                  horizon: int | None = None, null_levels: int = 4) -> KillReport:
    """Build a finer uniform-convergence chain along which xs stays away from 0.

    xs is read as x_1, x_2, ... ; pass the string "terms" for x_i = b_i.  Each
    round j searches n upward from the minimum allowed by the gap condition
    and m forward through the prefix, taking the first (n, m) with b_n | x_m
    and b_{n+1} not dividing x_m.  The witness is checked against the digit
    expansion and against the arc bound before the round is accepted.
    """
    if rounds < 1:
        raise ValueError(f"rounds must be positive, got {rounds}")
    if isinstance(xs, str):
        if xs != "terms":
            raise ValueError(f"unknown sequence shorthand {xs!r}")
        if horizon is None:
            horizon = rounds * (rounds + 1) // 2 + rounds + 8
        xs_list = tuple(base.term(i) for i in range(1, horizon + 1))
        xs_desc = "terms"
    else:
        xs_list = tuple(int(x) for x in xs)
        horizon = len(xs_list)
        xs_desc = f"list[{horizon}]"
    bound = _validate_killer_inputs(base, xs_list, null_levels)

    nonzero = [abs(x) for x in xs_list if x]
    n_cap = 0
    if nonzero:
        biggest = max(nonzero)
        while base.term(n_cap + 1) <= biggest:
            n_cap += 1

    out: list[KillRound] = []
    n_min = 1
    for j in range(1, rounds + 1):
        hit = None
        for n in range(n_min, n_cap + 1):
            bn = base.term(n)
            bn1 = base.term(n + 1)
            for pos, x in enumerate(xs_list):
                if x % bn == 0 and x % bn1 != 0:
                    hit = (n, pos + 1, x)
                    break
            if hit:
                break
        if hit is None:
            raise HorizonError(
                f"round {j}: no admissible (n, m) with n in [{n_min}, {n_cap}] "
                f"and m <= {horizon}")
        n, m, x = hit
        witness = CircleElem.make(x, base.term(n + 1))
        digits = base.expand(x).digits
        # digit argument: the leading digit alone determines the witness
        assert digits[n] != 0 and all(k == 0 for k in digits[:n])
        assert CircleElem.make(digits[n], base.ratio(n + 1)) == witness
        assert not witness.in_arc(bound)
        out.append(KillRound(n, m, witness))
        n_min = n + j + 1
    c = base.subsequence([r.n + 1 for r in out])
    return KillReport(tuple(out), c, bound, xs_list, base.descriptor, xs_desc,
                      horizon)


# -- arc lemma sweeps ------------------------------------------------------------


@dataclass(frozen=True)
class Lemma1Sweep:
    """Exhaustive check: k..mk in the quarter arc and mk in the level-n arc
    force k into the level-(n*m) arc."""

    passed: bool
    counterexample: dict | None
    max_den: int
    max_m: int
    max_n: int
    elements: int
    premise_pairs: int


def verify_lemma1(max_den: int, max_m: int, max_n: int) -> Lemma1Sweep:
    if max_den < 1 or max_m < 1 or max_n < 1:
        raise ValueError("sweep bounds must be positive")
    elements = 0
    premise_pairs = 0
    for den in range(1, max_den + 1):
        for num in range(-((den - 1) // 2), den // 2 + 1):
            if gcd(abs(num), den) != 1:
                continue
            elements += 1
            for m in range(1, max_m + 1):
                a = abs(centered_mod(m * num, den))
                if 4 * a > den:
                    break  # premise chain k..mk broken, larger m inherit the gap
                premise_pairs += 1
                for n in range(1, max_n + 1):
                    if 4 * n * a <= den and 4 * n * m * abs(num) > den:
                        return Lemma1Sweep(
                            False,
                            {"k": f"{num}/{den}", "m": m, "n": n,
                             "mk": str(CircleElem.make(m * num, den))},
                            max_den, max_m, max_n, elements, premise_pairs)
    return Lemma1Sweep(True, None, max_den, max_m, max_n, elements, premise_pairs)


# -- chain sweep (iterated lemma) -------------------------------------------------


def _products_upto(alphabet: tuple[int, ...], max_product: int) -> list[int]:
    seen = {1}
    frontier = [1]
    while frontier:
        nxt = []
        for p in frontier:
            for a in alphabet:
                q = p * a
                if q <= max_product and q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return sorted(seen)


@dataclass(frozen=True)
class ChainSweep:
    """Exhaustive check of the iterated arc lemma over multiplier chains.

    For every chain over the alphabet with product <= max_product and every
    canonical k with denominator <= 4*max_product: whenever the staged
    multiples of k stay in the quarter arc, k lands in the arc of level equal
    to the chain product.  Survivors are the k passing every chain's premise;
    all of them are forced into the arc of the largest achievable product, so
    below that resolution (denominator < 4*max_chain_product) only k = 0
    survives.  Boundary survivors at or above the resolution are listed, not
    hidden.
    """

    passed: bool
    counterexample: dict | None
    alphabet: tuple[int, ...]
    max_product: int
    max_chain_product: int
    resolution: int
    elements: int
    survivors_below_resolution: tuple[str, ...]
    boundary_survivors: int
    forced_bounds_confirmed: bool


def verify_lemma_chain(alphabet: Iterable[int], max_product: int) -> ChainSweep:
    alpha = tuple(sorted(set(int(a) for a in alphabet)))
    if not alpha or any(a < 2 for a in alpha):
        raise ValueError("alphabet entries must be integers >= 2")
    if max_product < min(alpha):
        raise ValueError("max_product admits no chain")
    prods = _products_upto(alpha, max_product)
    chain_prods = [p for p in prods if p > 1]
    p_max = max(chain_prods)
    edges = [(p, m) for p in prods for m in alpha if p * m <= max_product]
    multipliers = sorted({j * p for p, m in edges for j in range(1, m + 1)})

    max_den = 4 * max_product
    # negation symmetry: sweep num >= 0 and count mirrored survivors
    nums = []
    dens = []
    for d in range(1, max_den + 1):
        ns = np.arange(0, d // 4 + 1, dtype=np.int64)
        ns = ns[np.gcd(ns, d) == 1]
        nums.append(ns)
        dens.append(np.full(ns.size, d, dtype=np.int64))
    num_arr = np.concatenate(nums)
    den_arr = np.concatenate(dens)

    conds: dict[int, np.ndarray] = {}

    def cond(c: int) -> np.ndarray:
        arr = conds.get(c)
        if arr is None:
            r = (c * num_arr) % den_arr
            arr = 4 * np.minimum(r, den_arr - r) <= den_arr
            conds[c] = arr
        return arr

    incoming: dict[int, list[tuple[int, int]]] = {}
    for p, m in edges:
        incoming.setdefault(p * m, []).append((p, m))

    counterexample = None
    reach: dict[int, np.ndarray] = {1: np.ones(num_arr.size, dtype=bool)}
    for target in chain_prods:
        acc = np.zeros(num_arr.size, dtype=bool)
        for p, m in incoming[target]:
            e = reach[p].copy()
            for jj in range(1, m + 1):
                e &= cond(jj * p)
            acc |= e
        reach[target] = acc
        if counterexample is None:
            viol = acc & (4 * target * num_arr > den_arr)
            if viol.any():
                i = int(np.argmax(viol))
                counterexample = {
                    "k": f"{int(num_arr[i])}/{int(den_arr[i])}",
                    "product": target,
                    "chain": _premise_chain(int(num_arr[i]), int(den_arr[i]),
                                            target, alpha),
                }

    surv = np.ones(num_arr.size, dtype=bool)
    for c in multipliers:
        surv &= cond(c)
    idx = np.nonzero(surv)[0]
    survivors = [(int(num_arr[i]), int(den_arr[i])) for i in idx]
    forced_ok = all(4 * p * n <= d for n, d in survivors for p in chain_prods)
    resolution = 4 * p_max
    below = sorted((n, d) for n, d in survivors if d < resolution)
    below_strs = tuple(f"{n}/{d}" for n, d in below)
    boundary = sum(2 if n else 1 for n, d in survivors if d >= resolution)
    passed = counterexample is None and forced_ok and below_strs == ("0/1",)
    return ChainSweep(passed, counterexample, alpha, max_product, p_max,
                      resolution, int(num_arr.size), below_strs, boundary,
                      forced_ok)


def _premise_chain(num: int, den: int, target: int, alphabet: tuple[int, ...],
                   ) -> list[int] | None:
    """A premise-satisfying chain reaching `target` for k = num/den, if any."""

    def ok(c: int) -> bool:
        r = (c * num) % den
        return 4 * min(r, den - r) <= den

    def dfs(p: int, chain: list[int]) -> list[int] | None:
        if p == target:
            return list(chain)
        for a in alphabet:
            q = p * a
            # partial products of a chain to `target` all divide it
            if q <= target and target % q == 0 and all(ok(j * p) for j in range(1, a + 1)):
                chain.append(a)
                got = dfs(q, chain)
                if got is not None:
                    return got
                chain.pop()
        return None

    return dfs(1, [])


def chain_sweep_reference(alphabet: Iterable[int], max_product: int,
                          ) -> tuple[list[dict], list[str]]:
    """Slow pure-Python re-derivation of the chain sweep, for cross-checking.

    Enumerates every chain explicitly and every canonical k up to the same
    denominator bound; returns (counterexamples, survivors with num >= 0).
    """
    alpha = tuple(sorted(set(int(a) for a in alphabet)))
    chains: list[tuple[int, ...]] = []

    def grow(chain: tuple[int, ...], prod: int) -> None:
        for a in alpha:
            if prod * a <= max_product:
                chains.append(chain + (a,))
                grow(chain + (a,), prod * a)

    grow((), 1)
    counterexamples = []
    survivors = []
    max_den = 4 * max_product
    for den in range(1, max_den + 1):
        for num in range(0, den // 4 + 1):
            if gcd(num, den) != 1:
                continue
            alive_all = True
            for chain in chains:
                prod = 1
                premise = True
                for m in chain:
                    for j in range(1, m + 1):
                        r = (j * prod * num) % den
                        if 4 * min(r, den - r) > den:
                            premise = False
                            break
                    if not premise:
                        break
                    prod *= m
                if not premise:
                    alive_all = False
                    continue
                if 4 * prod * num > den:
                    counterexamples.append(
                        {"k": f"{num}/{den}", "chain": list(chain), "product": prod})
            if alive_all:
                survivors.append(f"{num}/{den}")
    return counterexamples, survivors


# -- locally quasi-convex modification, window scale -------------------------------


@dataclass(frozen=True)
class LqcModReport:
    """Window-scale comparison of the two polars.

    `graev_polar` comes from the witness set; `adic_polar` is the exact polar
    of the subgroup b_N * Z inside the window (the character values on the
    subgroup cycle with period b_M/b_N, so sweeping one period decides it).
    Equality supports the claim that the neighborhood's polar collapses to a
    single finite character window.
    """

    equal: bool
    N: int
    window_level: int
    count: int
    graev_polar: tuple[Character, ...]
    adic_polar: tuple[Character, ...]

    def __bool__(self) -> bool:
        return self.equal


def verify_lqc_modification(base: DSequence, spec: GraevSpec, window_level: int,
                            count: int) -> LqcModReport:
    gp = graev_polar_window(base, spec, window_level, count)
    bm = base.term(window_level)
    bn = base.term(gp.N)
    period = bm // bn
    subgroup = [bn * t for t in range(period)]
    adic = polar_window(subgroup, base, window_level)
    return LqcModReport(set(gp.characters) == set(adic), gp.N, window_level,
                        count, gp.characters, adic)
