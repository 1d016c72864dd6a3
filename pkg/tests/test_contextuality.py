import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from modules.contextuality import (
    NONCONTEXTUAL_BOUND,
    all_sigmas,
    maximize_sigma,
    probability_sum,
    sigma_from_data,
    sigma_from_kd,
    sigma_operator,
    single_zero_state,
    violation_criterion,
)
from modules.hilbert import born, eigenvalues, maximally_mixed, pure_density
from modules.kd import eleven_terms, negative_terms
from modules.pentagon import SHARED_OUTCOMES
from modules.tomography import RedEntries, extract, red_from_state


class TestProbabilitySum:
    def test_nx_violates(self, nx, frame):
        report = probability_sum(nx, frame)
        assert report.sigma == pytest.approx(20 / 9, abs=1e-12)
        assert report.violated
        assert report.margin == pytest.approx(2 / 9, abs=1e-12)
        assert report.probabilities["1"] == pytest.approx(4 / 9, abs=1e-12)
        assert report.probabilities["S1"] == pytest.approx(1 / 2, abs=1e-12)
        assert report.probabilities["f"] == pytest.approx(1 / 3, abs=1e-12)

    def test_mixed_state(self, frame):
        report = probability_sum(maximally_mixed(), frame)
        assert report.sigma == pytest.approx(5 / 3, abs=1e-12)
        assert not report.violated

    def test_t1f_does_not_violate(self, t1f, frame):
        assert not probability_sum(t1f, frame).violated


class TestThreeWays:
    def test_nx(self, nx, frame):
        assert_allclose(all_sigmas(nx, frame), [20 / 9] * 3, atol=1e-12)

    def test_agreement_on_random_states(self, states, frame):
        for rho in states:
            born_sum, from_data, from_kd = all_sigmas(rho, frame)
            assert from_data == pytest.approx(born_sum, abs=1e-10)
            assert from_kd == pytest.approx(born_sum, abs=1e-10)

    def test_operator_expectation(self, states, frame):
        op = sigma_operator(frame)
        for rho in states[:20]:
            assert np.trace(rho @ op).real == pytest.approx(probability_sum(rho, frame).sigma, abs=1e-10)


class TestCriterion:
    def test_nx(self, nx, frame):
        lhs, violated = violation_criterion(red_from_state(nx, frame))
        assert lhs == pytest.approx(17 / 9, abs=1e-12)
        assert violated

    def test_zero_entries(self):
        lhs, violated = violation_criterion(RedEntries.zeros())
        assert lhs == 0
        assert not violated

    def test_equivalent_to_sigma(self, states, frame):
        for rho in states:
            lhs, violated = violation_criterion(red_from_state(rho, frame))
            sigma = sigma_from_data(extract(rho, frame))
            assert sigma == pytest.approx(1.75 + lhs / 4, abs=1e-10)
            assert violated == (sigma > NONCONTEXTUAL_BOUND + 1e-10)


class TestNoncontextualStates:
    def test_nonnegative_distributions_respect_the_bound(self, states, state_of, frame):
        candidates = [state_of(outcome) for outcome in SHARED_OUTCOMES] + list(states)
        checked = 0
        for rho in candidates:
            terms = eleven_terms(rho, frame)
            if not negative_terms(terms, tol=1e-12):
                checked += 1
                assert sigma_from_kd(terms) <= NONCONTEXTUAL_BOUND + 1e-10
        assert checked >= len(SHARED_OUTCOMES)

    @staticmethod
    def check_mixtures(rng, projectors, frame, count):
        for weights in rng.dirichlet(np.ones(len(projectors)), size=count):
            rho = sum(w * p for w, p in zip(weights, projectors))
            sigma = sigma_from_kd(eleven_terms(rho, frame))
            assert sigma <= NONCONTEXTUAL_BOUND + 1e-10
            assert sigma == pytest.approx(probability_sum(rho, frame).sigma, abs=1e-10)

    def test_mixtures_of_shared_projectors(self, rng, state_of, frame):
        projectors = [state_of(outcome) for outcome in SHARED_OUTCOMES]
        self.check_mixtures(rng, projectors, frame, 2000)

    @pytest.mark.slow
    def test_many_mixtures_of_shared_projectors(self, rng, state_of, frame):
        projectors = [state_of(outcome) for outcome in SHARED_OUTCOMES]
        self.check_mixtures(rng, projectors, frame, 100_000)

    def test_violation_needs_a_negative_term(self, nx, frame):
        terms = eleven_terms(nx, frame)
        assert sigma_from_kd(terms) > NONCONTEXTUAL_BOUND
        assert negative_terms(terms)

    @pytest.mark.parametrize("outcome", SHARED_OUTCOMES)
    def test_single_zero(self, frame, rng, outcome):
        for _ in range(100):
            vec = single_zero_state(outcome, rng, frame)
            rho = pure_density(vec)
            assert born(rho, frame.vec(outcome)) == pytest.approx(0, abs=1e-14)
            assert probability_sum(rho, frame).sigma <= NONCONTEXTUAL_BOUND + 1e-10


class TestMaximum:
    def test_eigenvalue_bound(self, frame):
        bound = eigenvalues(sigma_operator(frame))[-1]
        assert 20 / 9 <= bound <= math.sqrt(5) + 1e-9

    def test_search_reaches_the_bound(self, frame):
        result = maximize_sigma(frame, restarts=5, seed=3)
        assert result.restarts == 5
        assert result.sigma == pytest.approx(result.eigen_bound, abs=1e-6)
        assert result.sigma <= math.sqrt(5) + 1e-6
        assert np.linalg.norm(result.state) == pytest.approx(1.0, abs=1e-12)
        assert probability_sum(pure_density(result.state), frame).sigma == pytest.approx(result.sigma, abs=1e-6)

    def test_search_is_reproducible(self, frame):
        first = maximize_sigma(frame, restarts=3, seed=11)
        second = maximize_sigma(frame, restarts=3, seed=11)
        assert first.sigma == second.sigma
