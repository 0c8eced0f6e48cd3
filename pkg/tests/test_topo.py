import pytest

from dseqtop import (
    CircleElem,
    DSequence,
    NeighborhoodSpec,
    gamma_check,
    gamma_member,
    lambda_member,
    null_prefix_certificate,
    tau_check,
    tau_member,
)
from dseqtop.errors import InvalidLevelError, NotASubsequenceError


@pytest.fixture
def fact():
    return DSequence.factorial()


@pytest.fixture
def r23():
    return DSequence.from_ratios([2, 3], repeat=True)


class TestLambda:
    def test_examples(self, fact):
        assert lambda_member(fact, 2, 12)
        assert not lambda_member(fact, 3, 12)

    def test_level_zero_is_everything(self, fact):
        for x in range(-20, 21):
            assert lambda_member(fact, 0, x)

    def test_negative_level(self, fact):
        with pytest.raises(InvalidLevelError):
            lambda_member(fact, -1, 5)


class TestTau:
    def test_one_not_member(self, fact):
        # 1/2 falls outside the quarter arc already at the second term
        chk = tau_check(fact, 1, 1)
        assert not chk.member and chk.violation_index == 1

    def test_zero_always_member(self, fact, r23):
        assert tau_member(fact, 1, 0)
        assert tau_member(r23, 7, 0)

    def test_24_member(self, fact):
        # terms up to the cutoff 96 are 1, 2, 6, 24 and all map 24 to zero
        chk = tau_check(fact, 1, 24)
        assert chk.member and chk.bound == 96 and chk.cutoff_index == 3

    def test_cutoff_agrees_with_longer_scan(self, fact, r23):
        # every term past the cutoff passes automatically; re-checking a much
        # longer prefix must never change the verdict
        for base in (fact, r23):
            for m in (1, 2, 3):
                for x in range(-40, 41):
                    chk = tau_check(base, m, x)
                    brute = all(CircleElem.make(x, base.term(j)).in_arc(m)
                                for j in range(chk.cutoff_index + 25))
                    assert chk.member == brute

    def test_monotone_in_level(self, r23):
        for x in range(-30, 31):
            for m in range(1, 5):
                if tau_member(r23, m + 1, x):
                    assert tau_member(r23, m, x)

    def test_symmetric(self, fact):
        for x in range(60):
            assert tau_member(fact, 2, x) == tau_member(fact, 2, -x)

    def test_level_validation(self, fact):
        with pytest.raises(InvalidLevelError):
            tau_member(fact, 0, 5)

    def test_finite_sequence_verdict(self, r23):
        # a finite extracted chain checks exactly its existing terms
        c = r23.subsequence([1, 3])
        chk = tau_check(c, 3, 2)
        assert not chk.member  # 2/6 = 1/3 misses the level-3 arc


class TestGamma:
    def test_singleton_reduces_to_tau(self, fact):
        for x in range(-25, 26):
            assert gamma_member([(fact, 1)], x) == tau_member(fact, 1, x)

    def test_zero(self, fact, r23):
        assert gamma_member([(fact, 1), (r23, 2)], 0)

    def test_conjunction(self, fact, r23):
        family = [(fact, 1), (r23, 1)]
        for x in range(-30, 31):
            want = tau_member(fact, 1, x) and tau_member(r23, 1, x)
            assert gamma_member(family, x) == want

    def test_components_reported(self, fact, r23):
        chk = gamma_check([(fact, 1), (r23, 1)], 5)
        assert len(chk.components) == 2

    def test_empty_family_rejected(self):
        with pytest.raises(ValueError):
            gamma_member([], 3)


class TestPointScaleComparison:
    def test_fine_uniform_forces_adic(self, fact, r23):
        # membership at level m = b_n over the base itself pins x to b_n Z:
        # the residue would otherwise sit farther than 1/(4 b_n) at term n
        for base in (fact, r23):
            for n in range(4):
                m = base.term(n)
                for x in range(-120, 121):
                    if tau_member(base, m, x):
                        assert lambda_member(base, n, x)


class TestNullCertificate:
    def test_sequence_terms_certify(self, fact):
        xs = [fact.term(i) for i in range(12)]
        for level in range(6):
            cert = null_prefix_certificate(fact, xs, level)
            assert cert.ok and cert.start == level

    def test_all_zero(self, fact):
        cert = null_prefix_certificate(fact, [0] * 8, 3)
        assert cert.ok and cert.start == 0

    def test_constant_ones_fail(self, fact):
        cert = null_prefix_certificate(fact, [1] * 8, 1)
        assert not cert.ok and cert.last_violation == 7

    def test_late_violation_shifts_start(self, fact):
        xs = [2, 4, 5, 8, 16, 32]
        cert = null_prefix_certificate(fact, xs, 1)
        assert cert.ok and cert.start == 3 and cert.last_violation == 2

    def test_empty_prefix(self, fact):
        cert = null_prefix_certificate(fact, [], 2)
        assert cert.ok and cert.start == 0


class TestNeighborhoodSpec:
    def test_adic_kind(self, fact):
        spec = NeighborhoodSpec.adic(fact, 2)
        assert 12 in spec and 8 not in spec

    def test_uniform_requires_subsequence(self, fact, r23):
        sub = fact.subsequence([0, 2, 4])
        spec = NeighborhoodSpec.uniform(fact, sub, 1)
        assert 0 in spec
        with pytest.raises(NotASubsequenceError):
            NeighborhoodSpec.uniform(fact, r23, 1)

    def test_family_membership(self, fact):
        s1 = fact.subsequence([0, 2, 4])
        s2 = fact.subsequence([0, 1, 3])
        spec = NeighborhoodSpec.sup_family(fact, [(s1, 1), (s2, 1)])
        for x in range(-20, 21):
            assert (x in spec) == gamma_member([(s1, 1), (s2, 1)], x)
