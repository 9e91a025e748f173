from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
from conftest import opinion_groups
from sldyn import (
    DogmaticOpinionError,
    Opinion,
    averaging_fuse,
    cumulative_fuse,
    projected,
    to_evidence,
    vacuous,
    weighted_fuse,
)

TOL = 1e-9
EXACT = 1e-12
W_CHOICES = st.sampled_from([1.0, 2.0, 5.0])

OP_A = Opinion((0.6, 0.0), 0.4, (0.5, 0.5))   # evidence (3, 0) at W=2
OP_B = Opinion((0.2, 0.0), 0.8, (0.5, 0.5))   # evidence (0.5, 0) at W=2
VAC = vacuous((0.5, 0.5))


def components_close(x, y, tol):
    assert x.belief == pytest.approx(y.belief, abs=tol)
    assert x.uncertainty == pytest.approx(y.uncertainty, abs=tol)
    assert x.base_rate == y.base_rate


class TestCumulative:
    def test_self_fusion_accumulates(self):
        out = cumulative_fuse([OP_A, OP_A], 2.0)
        components_close(out, Opinion((0.75, 0.0), 0.25, (0.5, 0.5)), TOL)

    def test_vacuous_is_neutral(self):
        components_close(cumulative_fuse([OP_A, VAC], 2.0), OP_A, EXACT)

    def test_weak_pair(self):
        weak = Opinion((0.4, 0.0), 0.6, (0.5, 0.5))  # evidence (4/3, 0)
        out = cumulative_fuse([OP_B, weak], 2.0)
        expected_b = (0.5 + 4.0 / 3.0) / (2.0 + 0.5 + 4.0 / 3.0)
        assert out.belief[0] == pytest.approx(expected_b, abs=TOL)
        assert out.uncertainty == pytest.approx(1.0 - expected_b, abs=TOL)

    @given(group=opinion_groups(2), w=W_CHOICES)
    def test_self_fusion_decreases_uncertainty(self, group, w):
        op = group[0]
        if sum(op.belief) > 1e-9:
            fused = cumulative_fuse([op, op], w)
            assert fused.uncertainty < op.uncertainty

    @given(group=opinion_groups(3), w=W_CHOICES)
    def test_associative(self, group, w):
        a, b, c = group
        left = cumulative_fuse([cumulative_fuse([a, b], w), c], w)
        right = cumulative_fuse([a, cumulative_fuse([b, c], w)], w)
        components_close(left, right, TOL)


class TestAveraging:
    def test_idempotent(self):
        components_close(averaging_fuse([OP_A, OP_A], 2.0), OP_A, EXACT)

    def test_mean_of_evidence(self):
        out = averaging_fuse([OP_A, OP_B], 2.0)  # mean evidence (1.75, 0)
        assert out.belief[0] == pytest.approx(1.75 / 3.75, abs=TOL)
        assert out.uncertainty == pytest.approx(2.0 / 3.75, abs=TOL)

    def test_vacuous_is_not_neutral(self):
        out = averaging_fuse([OP_A, VAC], 2.0)
        assert abs(out.belief[0] - OP_A.belief[0]) > 1e-3


class TestWeighted:
    def test_idempotent(self):
        components_close(weighted_fuse([OP_A, OP_A], 2.0), OP_A, EXACT)

    def test_vacuous_is_neutral(self):
        components_close(weighted_fuse([OP_A, VAC], 2.0), OP_A, EXACT)

    def test_confidence_weighted_mean(self):
        out = weighted_fuse([OP_A, OP_B], 2.0)
        # confidences 0.6 and 0.2; evidence (0.6*3 + 0.2*0.5)/0.8 = 2.375
        assert out.belief[0] == pytest.approx(2.375 / 4.375, abs=TOL)
        assert out.uncertainty == pytest.approx(2.0 / 4.375, abs=TOL)

    def test_all_vacuous_gives_vacuous(self):
        assert weighted_fuse([VAC, VAC], 2.0) == VAC


class TestPreconditions:
    @pytest.mark.parametrize("fuse", [cumulative_fuse, averaging_fuse, weighted_fuse])
    def test_empty_input_rejected(self, fuse):
        with pytest.raises(ValueError):
            fuse([], 2.0)

    @pytest.mark.parametrize("fuse", [cumulative_fuse, averaging_fuse, weighted_fuse])
    def test_dogmatic_rejected(self, fuse):
        dogmatic = Opinion((1.0, 0.0), 0.0, (0.5, 0.5))
        with pytest.raises(DogmaticOpinionError):
            fuse([OP_A, dogmatic], 2.0)

    @pytest.mark.parametrize("fuse", [cumulative_fuse, averaging_fuse, weighted_fuse])
    def test_mismatched_base_rates_rejected(self, fuse):
        other = Opinion((0.6, 0.0), 0.4, (0.25, 0.75))
        with pytest.raises(ValueError, match="base rate"):
            fuse([OP_A, other], 2.0)

    @pytest.mark.parametrize("fuse", [cumulative_fuse, averaging_fuse, weighted_fuse])
    def test_mismatched_domains_rejected(self, fuse):
        other = Opinion((0.0, 0.0, 0.0), 1.0, (0.25, 0.25, 0.5))
        with pytest.raises(ValueError, match="domain"):
            fuse([OP_A, other], 2.0)


class TestAlgebraicProperties:
    @pytest.mark.parametrize("fuse", [cumulative_fuse, averaging_fuse, weighted_fuse])
    @given(group=opinion_groups(2), w=W_CHOICES)
    def test_commutative(self, fuse, group, w):
        a, b = group
        components_close(fuse([a, b], w), fuse([b, a], w), EXACT)

    @pytest.mark.parametrize("fuse", [averaging_fuse, weighted_fuse])
    @given(group=opinion_groups(3), w=W_CHOICES)
    def test_nary_permutation_invariant(self, fuse, group, w):
        a, b, c = group
        components_close(fuse([a, b, c], w), fuse([c, a, b], w), TOL)

    @pytest.mark.parametrize("fuse", [cumulative_fuse, averaging_fuse, weighted_fuse])
    @given(group=opinion_groups(2), w=W_CHOICES)
    def test_result_valid_and_non_dogmatic(self, fuse, group, w):
        out = fuse(list(group), w)
        assert out.uncertainty > 0.0
        assert sum(out.belief) + out.uncertainty == pytest.approx(1.0, abs=TOL)

    @pytest.mark.parametrize(
        "fuse,name",
        [(cumulative_fuse, "cumulative"), (averaging_fuse, "averaging"), (weighted_fuse, "weighted")],
    )
    @given(group=opinion_groups(2), w=W_CHOICES)
    def test_matches_exact_rational_oracle(self, fuse, name, group, w):
        out = fuse(list(group), w)
        expected = oracle.fuse([oracle.exact(op) for op in group], Fraction(w), name)
        assert oracle.max_error(out, expected) <= TOL


class TestEvidenceView:
    @given(group=opinion_groups(2))
    def test_cumulative_sums_evidence(self, group):
        a, b = group
        fused_ev = to_evidence(cumulative_fuse([a, b], 2.0), 2.0)
        ra = to_evidence(a, 2.0).evidence
        rb = to_evidence(b, 2.0).evidence
        expected = tuple(x + y for x, y in zip(ra, rb))
        assert fused_ev.evidence == pytest.approx(expected, abs=1e-6, rel=1e-6)
