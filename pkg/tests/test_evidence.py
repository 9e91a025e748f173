import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import non_dogmatic_opinions
from sldyn import (
    DogmaticOpinionError,
    EvidenceOpinion,
    Opinion,
    dirichlet_density,
    expected_probability,
    from_evidence,
    projected,
    to_evidence,
    vacuous,
)

TOL = 1e-9
W_CHOICES = st.sampled_from([1.0, 2.0, 5.0])


class TestEvidenceOpinion:
    def test_alpha(self):
        ev = EvidenceOpinion((3.0, 0.0), (0.5, 0.5), 2.0)
        assert ev.alpha == (4.0, 1.0)

    def test_negative_evidence_rejected(self):
        with pytest.raises(ValueError, match="evidence"):
            EvidenceOpinion((-1.0, 0.0), (0.5, 0.5), 2.0)

    def test_infinite_evidence_rejected(self):
        with pytest.raises(ValueError, match="evidence"):
            EvidenceOpinion((math.inf, 0.0), (0.5, 0.5), 2.0)

    def test_nonpositive_prior_weight_rejected(self):
        with pytest.raises(ValueError, match="prior_weight"):
            EvidenceOpinion((1.0, 0.0), (0.5, 0.5), 0.0)


class TestToEvidence:
    def test_example_opinion(self):
        ev = to_evidence(Opinion((0.6, 0.0), 0.4, (0.5, 0.5)), 2.0)
        assert ev.evidence == pytest.approx((3.0, 0.0), abs=TOL)
        assert ev.base_rate == (0.5, 0.5)

    def test_vacuous_has_no_evidence(self):
        assert to_evidence(vacuous((0.5, 0.5)), 2.0).evidence == (0.0, 0.0)

    def test_dogmatic_rejected(self):
        with pytest.raises(DogmaticOpinionError):
            to_evidence(Opinion((0.5, 0.5), 0.0, (0.5, 0.5)), 2.0)


class TestFromEvidence:
    def test_example_counts(self):
        op = from_evidence(EvidenceOpinion((3.0, 0.0), (0.5, 0.5), 2.0))
        assert op.belief == pytest.approx((0.6, 0.0), abs=TOL)
        assert op.uncertainty == pytest.approx(0.4, abs=TOL)

    def test_no_evidence_gives_vacuous(self):
        op = from_evidence(EvidenceOpinion((0.0, 0.0), (0.5, 0.5), 2.0))
        assert op == vacuous((0.5, 0.5))

    def test_strong_evidence(self):
        op = from_evidence(EvidenceOpinion((8.0, 0.0), (0.5, 0.5), 2.0))
        assert op.belief == pytest.approx((0.8, 0.0), abs=TOL)
        assert op.uncertainty == pytest.approx(0.2, abs=TOL)


class TestExpectedProbability:
    def test_example_counts(self):
        ev = EvidenceOpinion((3.0, 0.0), (0.5, 0.5), 2.0)
        assert expected_probability(ev) == pytest.approx((0.8, 0.2), abs=TOL)

    def test_no_evidence_gives_base_rate(self):
        ev = EvidenceOpinion((0.0, 0.0), (0.5, 0.5), 2.0)
        assert expected_probability(ev) == pytest.approx((0.5, 0.5), abs=TOL)

    def test_strong_evidence(self):
        ev = EvidenceOpinion((8.0, 0.0), (0.5, 0.5), 2.0)
        assert expected_probability(ev) == pytest.approx((0.9, 0.1), abs=TOL)

    @given(
        r=st.lists(st.floats(0.0, 50.0, allow_nan=False), min_size=2, max_size=2),
        w=W_CHOICES,
    )
    def test_adding_evidence_raises_expectation(self, r, w):
        ev = EvidenceOpinion(tuple(r), (0.5, 0.5), w)
        bumped = EvidenceOpinion((r[0] + 1.0, r[1]), (0.5, 0.5), w)
        assert expected_probability(bumped)[0] > expected_probability(ev)[0]


class TestRoundTrips:
    @given(op=non_dogmatic_opinions(), w=W_CHOICES)
    def test_opinion_evidence_opinion(self, op, w):
        back = from_evidence(to_evidence(op, w))
        assert back.belief == pytest.approx(op.belief, abs=TOL)
        assert back.uncertainty == pytest.approx(op.uncertainty, abs=TOL)
        assert back.base_rate == op.base_rate

    @given(
        r=st.lists(st.floats(0.0, 100.0, allow_nan=False), min_size=2, max_size=4),
        w=W_CHOICES,
    )
    def test_evidence_opinion_evidence(self, r, w):
        k = len(r)
        ev = EvidenceOpinion(tuple(r), (1.0 / k,) * k, w)
        back = to_evidence(from_evidence(ev), w)
        assert back.evidence == pytest.approx(ev.evidence, abs=TOL, rel=1e-9)

    @given(op=non_dogmatic_opinions(), w=W_CHOICES)
    def test_expected_matches_projected(self, op, w):
        ev = to_evidence(op, w)
        assert expected_probability(ev) == pytest.approx(projected(op), abs=TOL)


class TestDirichletDensity:
    def test_uniform_prior_is_flat(self):
        ev = EvidenceOpinion((0.0, 0.0), (0.5, 0.5), 2.0)  # alpha = (1, 1)
        for p in (0.1, 0.5, 0.9):
            assert dirichlet_density(ev, (p, 1.0 - p)) == pytest.approx(1.0, abs=TOL)

    def test_symmetric_alpha_two(self):
        ev = EvidenceOpinion((1.0, 1.0), (0.5, 0.5), 2.0)  # alpha = (2, 2)
        assert dirichlet_density(ev, (0.5, 0.5)) == pytest.approx(1.5, abs=TOL)

    def test_linear_density(self):
        ev = EvidenceOpinion((1.0, 0.0), (0.5, 0.5), 2.0)  # alpha = (2, 1)
        assert dirichlet_density(ev, (0.5, 0.5)) == pytest.approx(1.0, abs=TOL)

    def test_zero_probability_with_small_alpha_rejected(self):
        ev = EvidenceOpinion((0.0, 0.0), (0.25, 0.75), 2.0)  # alpha = (0.5, 1.5)
        with pytest.raises(ValueError, match="alpha"):
            dirichlet_density(ev, (0.0, 1.0))

    def test_zero_probability_with_large_alpha_is_zero(self):
        ev = EvidenceOpinion((2.0, 0.0), (0.5, 0.5), 2.0)  # alpha = (3, 1)
        assert dirichlet_density(ev, (0.0, 1.0)) == 0.0

    def test_non_distribution_rejected(self):
        ev = EvidenceOpinion((0.0, 0.0), (0.5, 0.5), 2.0)
        with pytest.raises(ValueError, match="sum"):
            dirichlet_density(ev, (0.5, 0.6))

    def test_large_counts_stay_finite(self):
        ev = EvidenceOpinion((5e4, 5e4), (0.5, 0.5), 2.0)
        val = dirichlet_density(ev, (0.5, 0.5))
        assert math.isfinite(val) and val > 0.0


def quadrature_normalization(ev, panels=10_000):
    """Integral of the density over the binary simplex.

    Substituting p = sin^2(u) keeps the integrand bounded whenever both
    alpha components exceed 0.5, so a midpoint rule converges well.
    """
    h = (math.pi / 2.0) / panels
    total = 0.0
    for i in range(panels):
        u = (i + 0.5) * h
        p = math.sin(u) ** 2
        total += dirichlet_density(ev, (p, 1.0 - p)) * math.sin(2.0 * u)
    return total * h


class TestNormalization:
    @pytest.mark.parametrize("alpha", [(0.6, 0.7), (1.0, 1.0), (2.5, 4.0), (5.0, 0.8)])
    def test_density_integrates_to_one(self, alpha):
        # base rate 0.5 with W chosen so r = alpha - a * W stays >= 0
        w = min(alpha) / 0.5 if min(alpha) < 1.0 else 2.0
        r = (alpha[0] - 0.5 * w, alpha[1] - 0.5 * w)
        ev = EvidenceOpinion(r, (0.5, 0.5), w)
        assert quadrature_normalization(ev) == pytest.approx(1.0, abs=1e-3)
