import itertools

import pytest
from hypothesis import given, settings, strategies as st

from dseqtop import DSequence, DigitExpansion, expansion_value, parse_spec
from dseqtop.errors import (
    InvalidExpansionError,
    InvalidIndicesError,
    MalformedSequenceError,
    SequenceExhaustedError,
    SpecParseError,
)


@pytest.fixture
def fact():
    return DSequence.factorial()


@pytest.fixture
def r23():
    return DSequence.from_ratios([2, 3], repeat=True)


class TestTerms:
    def test_first_term_is_one(self, fact, r23):
        assert fact.term(0) == 1
        assert r23.term(0) == 1
        assert DSequence.powers(5).term(0) == 1

    def test_factorial_terms(self, fact):
        assert fact.terms_prefix(6) == (1, 2, 6, 24, 120, 720)

    def test_repeat_ratio_terms(self, r23):
        assert r23.term(4) == 36
        assert r23.terms_prefix(6) == (1, 2, 6, 12, 36, 72)

    def test_primorial_terms(self):
        assert DSequence.primorial().terms_prefix(5) == (1, 2, 6, 30, 210)

    def test_powers_terms(self):
        assert DSequence.powers(2).terms_prefix(6) == (1, 2, 4, 8, 16, 32)

    def test_ratio_accessor(self, fact):
        assert [fact.ratio(n) for n in (1, 2, 3)] == [2, 3, 4]

    def test_malformed_ratio_rejected(self):
        with pytest.raises(MalformedSequenceError):
            DSequence.from_ratios([1, 3])
        with pytest.raises(MalformedSequenceError):
            DSequence.powers(1)
        bad = DSequence(lambda i: 3 - i, descriptor="shrinking")
        with pytest.raises(MalformedSequenceError):
            bad.term(3)

    def test_finite_list_exhausts(self):
        b = DSequence.from_ratios([2, 3, 2])
        assert b.term(3) == 12
        with pytest.raises(SequenceExhaustedError):
            b.term(4)

    def test_negative_index(self, fact):
        with pytest.raises(ValueError):
            fact.term(-1)


class TestPredicates:
    def test_bounded_verdict_repeat(self, r23):
        v = r23.has_bounded_ratios(10)
        assert v.prefix_max == 3 and v.bound == 3

    def test_bounded_verdict_factorial(self, fact):
        # ratios within the first ten terms peak at q_9 = 10; no global bound
        v = fact.has_bounded_ratios(10)
        assert v.prefix_max == 10 and v.bound is None

    def test_bounded_verdict_powers(self):
        v = DSequence.powers(2).has_bounded_ratios(5)
        assert v.prefix_max == 2 and v.bound == 2

    def test_is_basic(self, fact, r23):
        assert r23.is_basic(20)
        assert not fact.is_basic(20)  # q_3 = 4
        assert DSequence.powers(2).is_basic(10)
        assert not DSequence.powers(4).is_basic(10)

    def test_block_growth_constant_ratio(self):
        v = DSequence.powers(2).block_growth(1, 3, 40)
        assert not v.holds_on_tail
        assert v.asymptotic is False

    def test_block_growth_factorial_tail(self, fact):
        v = fact.block_growth(1, 100, 200)
        assert v.holds_on_tail and v.tail_start == 98  # q_n >= 100 from n = 98 on
        assert v.asymptotic is True

    def test_block_growth_declared_block_length(self):
        b = parse_spec("ratios:2,3;repeat growth=dinf-l:2")
        assert b.block_growth(2, 2, 20).asymptotic is None or True  # ell == block_len
        assert b.block_growth(2, 2, 20).asymptotic is True
        assert b.block_growth(1, 2, 20).asymptotic is None


class TestExpand:
    def test_worked_example(self, fact):
        assert fact.expand(10).digits == (0, -1, 2)

    def test_zero_is_empty(self, fact, r23):
        assert fact.expand(0).digits == ()
        assert r23.expand(0).digits == ()

    def test_one(self, r23):
        assert r23.expand(1).digits == (1,)

    def test_tie_takes_positive_half(self, fact):
        # remainder 2 against ratio 4 sits exactly at the halfway tie
        assert fact.expand(10).digits[2] == 2

    def test_round_trip_range(self, fact, r23):
        for base in (fact, r23, DSequence.powers(2)):
            for value in range(-3000, 3001):
                assert base.expand(value).value() == value

    def test_partial_sums_within_provable_bound(self, fact, r23):
        # |S_n| < b_{n+1} holds for every greedy expansion: the normalized
        # sums obey c_n <= c_{n-1}/q_{n+1} + 1/2 with c_0 <= 1/2
        for base in (fact, r23):
            for value in range(-2000, 2001):
                e = base.expand(value)
                bs = base.terms_prefix(len(e.digits) + 1)
                for n, s in enumerate(e.partial_sums()):
                    assert abs(s) < bs[n + 1]

    def test_half_bound_violations_exist_and_are_forced(self, r23):
        # 9 = 1*1 + 1*2 + 1*6 is the unique digit choice and breaks the
        # half bound at n = 2; the brute-force check below proves no
        # in-range alternative exists.
        e = r23.expand(9)
        assert e.digits == (1, 1, 1)
        assert e.half_bound_violations() == (2,)
        sols = []
        ranges = [(0, 1), (-1, 0, 1), (0, 1), (-1, 0, 1), (0, 1), (-1, 0, 1)]
        bs = r23.terms_prefix(6)
        for tup in itertools.product(*ranges):
            if sum(k * b for k, b in zip(tup, bs)) == 9:
                sols.append(tup)
        assert sols == [(1, 1, 1, 0, 0, 0)]

    def test_half_bound_violation_factorial(self, fact):
        e = fact.expand(15)
        assert e.digits == (1, 1, 2)
        assert e.half_bound_violations() == (2,)

    def test_all_two_tail_negative_values(self):
        # over an all-2 tail the loop would never leave remainder -1, so the
        # final digit is allowed to take the signed boundary value
        b = DSequence.powers(2)
        assert b.expand(-1).digits == (-1,)
        assert b.expand(-5).digits == (1, 1, 0, -1)
        for value in range(-400, 0):
            assert b.expand(value).value() == value

    def test_uniqueness_flag(self, fact, r23):
        assert fact.expand(7).unique is True
        assert r23.expand(7).unique is True
        assert DSequence.powers(2).expand(7).unique is False

    @given(st.integers(-10**9, 10**9))
    @settings(max_examples=300)
    def test_round_trip_hypothesis(self, value):
        for base in (DSequence.factorial(), DSequence.from_ratios([2, 3], repeat=True)):
            assert base.expand(value).value() == value


class TestExpansionValue:
    def test_worked_example(self, fact):
        assert expansion_value(fact, [0, -1, 2]) == 10

    def test_empty(self, fact):
        assert expansion_value(fact, []) == 0

    def test_single(self, fact):
        assert expansion_value(fact, [1]) == 1

    def test_rejects_out_of_range_digit(self, fact):
        with pytest.raises(InvalidExpansionError):
            expansion_value(fact, [2])  # q_1 = 2 allows only {0, 1}

    def test_rejects_trailing_zero(self, fact):
        with pytest.raises(InvalidExpansionError):
            expansion_value(fact, [1, 0])

    def test_allows_signed_final_digit_only(self):
        b = DSequence.powers(2)
        assert expansion_value(b, [-1]) == -1
        with pytest.raises(InvalidExpansionError):
            expansion_value(b, [-1, 1])


class TestSubsequence:
    def test_factorial_pick(self, fact):
        sub = fact.subsequence([0, 2, 4])
        assert sub.terms_prefix(3) == (1, 6, 120)

    def test_prepends_root(self, fact):
        sub = fact.subsequence([2, 4])
        assert sub.term(0) == 1 and sub.term(1) == 6

    def test_identity_terms(self, fact):
        sub = fact.subsequence(range(8))
        assert sub.terms_prefix(8) == fact.terms_prefix(8)

    def test_ratios_multiply(self, r23):
        sub = r23.subsequence([0, 2, 4])
        assert sub.terms_prefix(3) == (1, 6, 36)
        assert (sub.ratio(1), sub.ratio(2)) == (6, 6)

    def test_rejects_bad_indices(self, fact):
        with pytest.raises(InvalidIndicesError):
            fact.subsequence([3, 1])
        with pytest.raises(InvalidIndicesError):
            fact.subsequence([-1, 2])

    def test_killer_style_blocks_grow(self, r23):
        # indices with gaps growing like the round number give block ratios >= 2^(j+1)
        sub = r23.subsequence([2, 4, 7, 11])
        v = sub.block_growth(1, 4, sub.term_count)
        assert v.holds_on_tail and v.tail_start == 0


class TestGrammar:
    def test_presets(self):
        assert parse_spec("factorial").descriptor == "factorial"
        assert parse_spec("primorial").term(3) == 30
        assert parse_spec("pow:3").term(2) == 9

    def test_ratios_repeat(self):
        b = parse_spec("ratios:2,3;repeat")
        assert b.term(5) == 72
        assert b.exact_bound == 3 and b.basic is True

    def test_ratios_finite(self):
        b = parse_spec("ratios:2,2,5")
        assert b.term(3) == 20
        assert b.term_count == 4

    def test_flags(self):
        b = parse_spec("ratios:2,3;repeat growth=bounded basic")
        assert b.growth == "bounded" and b.basic is True
        b = parse_spec("factorial growth=dinf")
        assert b.growth == "dinf"
        b = parse_spec("ratios:4,5;repeat growth=dinf-l:3")
        assert b.growth == "dinf-l" and b.block_len == 3

    def test_ratio_below_two_rejected(self):
        with pytest.raises(MalformedSequenceError):
            parse_spec("ratios:1,3")

    def test_parse_errors_carry_position(self):
        with pytest.raises(SpecParseError) as exc:
            parse_spec("ratios:2,x")
        assert exc.value.position is not None
        with pytest.raises(SpecParseError):
            parse_spec("fibonacci")
        with pytest.raises(SpecParseError):
            parse_spec("factorial growth=weird")
        with pytest.raises(SpecParseError):
            parse_spec("factorial sideways")
        with pytest.raises(SpecParseError):
            parse_spec("")

    def test_descriptor_equality(self):
        assert parse_spec("ratios:2,3;repeat") == DSequence.from_ratios([2, 3], repeat=True)
        assert parse_spec("factorial") != parse_spec("primorial")
