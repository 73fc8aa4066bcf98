"""
Tests for realizations, conditioning and enumeration

These tests pin down the probability bookkeeping every policy and oracle
relies on: consistency, conditioning, exact enumeration and sampling.
"""
import itertools
import math
import unittest

import numpy as np

from pasm.impl.realizations import (
    condition_prior,
    enumerate_realizations,
    is_consistent,
    is_subrealization,
    probability_of,
    sample_realization,
    sample_realizations,
)
from pasm.types.errors import ConditioningError, EnumerationCapExceeded, ModelError
from pasm.types.model import ExplicitPrior, IndependentPrior, PartialRealization, Realization


class TestPartialRealization(unittest.TestCase):
    """Test cases for partial realizations"""

    def test_equality_ignores_observation_order(self):
        first = PartialRealization(((2, 1), (0, 0)))
        second = PartialRealization(((0, 0), (2, 1)))
        self.assertEqual(first, second)
        self.assertEqual(hash(first), hash(second))
        self.assertEqual(first.key, ((0, 0), (2, 1)))

    def test_item_observed_twice_is_rejected(self):
        with self.assertRaises(ModelError):
            PartialRealization(((0, 0), (0, 1)))

    def test_extend_keeps_observation_order(self):
        psi = PartialRealization.empty().extend([(3, 1)]).extend([(1, 0)])
        self.assertEqual(psi.observations, ((3, 1), (1, 0)))
        self.assertEqual(psi.domain, frozenset({1, 3}))


class TestConsistency(unittest.TestCase):
    """Test cases for consistency and the sub-realization order"""

    def test_consistent_realization(self):
        phi = Realization((0, 1, 1))
        self.assertTrue(is_consistent(phi, PartialRealization.of({1: 1, 2: 1})))
        self.assertFalse(is_consistent(phi, PartialRealization.of({0: 1})))
        self.assertTrue(is_consistent(phi, PartialRealization.empty()))

    def test_subrealization(self):
        small = PartialRealization.of({0: 1})
        large = PartialRealization.of({0: 1, 2: 0})
        self.assertTrue(is_subrealization(small, large))
        self.assertFalse(is_subrealization(large, small))
        self.assertFalse(is_subrealization(PartialRealization.of({0: 0}), large))
        self.assertTrue(is_subrealization(PartialRealization.empty(), large))


class TestConditioning(unittest.TestCase):
    """Test cases for probabilities and conditioning"""

    def setUp(self):
        self.independent = IndependentPrior(((0.5, 0.5), (0.25, 0.75)))
        self.explicit = ExplicitPrior(
            (
                (Realization((0, 0)), 0.2),
                (Realization((0, 1)), 0.3),
                (Realization((1, 1)), 0.5),
            )
        )

    def test_probability_of_independent_prior(self):
        self.assertAlmostEqual(probability_of(self.independent, PartialRealization.of({1: 1})), 0.75)
        self.assertAlmostEqual(probability_of(self.independent, PartialRealization.of({0: 1, 1: 0})), 0.125)

    def test_probability_of_explicit_prior(self):
        self.assertAlmostEqual(probability_of(self.explicit, PartialRealization.of({1: 1})), 0.8)
        self.assertAlmostEqual(probability_of(self.explicit, PartialRealization.of({0: 1, 1: 0})), 0.0)

    def test_condition_explicit_prior_renormalizes(self):
        conditioned = condition_prior(self.explicit, PartialRealization.of({0: 0}))
        self.assertEqual(len(conditioned.rows), 2)
        self.assertAlmostEqual(dict((phi.states, p) for phi, p in conditioned.rows)[(0, 1)], 0.6)

    def test_condition_independent_prior_collapses_observed_items(self):
        conditioned = condition_prior(self.independent, PartialRealization.of({0: 1}))
        self.assertEqual(conditioned.marginals[0], (0.0, 1.0))
        self.assertEqual(conditioned.marginals[1], (0.25, 0.75))

    def test_conditioning_on_impossible_observation_fails(self):
        with self.assertRaises(ConditioningError):
            condition_prior(self.explicit, PartialRealization.of({0: 1, 1: 0}))


class TestEnumeration(unittest.TestCase):
    """Test cases for exact enumeration and sampling"""

    def test_zero_probability_states_are_skipped(self):
        prior = IndependentPrior(((1.0, 0.0), (0.5, 0.5)))
        realizations = enumerate_realizations(prior)
        self.assertEqual([phi.states for phi, _ in realizations], [(0, 0), (0, 1)])
        self.assertTrue(math.isclose(sum(p for _, p in realizations), 1.0))

    def test_cap_exceeded(self):
        prior = IndependentPrior(((0.5, 0.5), (0.5, 0.5)))
        with self.assertRaises(EnumerationCapExceeded):
            enumerate_realizations(prior, cap=3)

    def test_sampling_is_deterministic_given_the_stream(self):
        prior = IndependentPrior(((0.2, 0.3, 0.5), (0.5, 0.5), (0.9, 0.1)))
        first = [sample_realization(prior, PartialRealization.empty(), np.random.default_rng(11)) for _ in range(3)]
        second = [sample_realization(prior, PartialRealization.empty(), np.random.default_rng(11)) for _ in range(3)]
        self.assertEqual(first, second)

    def test_conditioned_samples_agree_with_observation(self):
        rng = np.random.default_rng(5)
        psi = PartialRealization.of({2: 1})
        prior = IndependentPrior(((0.5, 0.5), (0.5, 0.5), (0.5, 0.5)))
        for _ in range(20):
            self.assertTrue(is_consistent(sample_realization(prior, psi, rng), psi))

    def test_three_binary_items_give_product_probabilities(self):
        marginals = ((0.3, 0.7), (0.6, 0.4), (0.5, 0.5))
        realizations = enumerate_realizations(IndependentPrior(marginals))
        self.assertEqual(len(realizations), 8)
        for phi, p in realizations:
            expected = math.prod(marginals[e][s] for e, s in enumerate(phi.states))
            self.assertAlmostEqual(p, expected)

    def test_sampled_frequency_matches_the_prior(self):
        prior = IndependentPrior(((0.3, 0.7), (0.5, 0.5)))
        rows = sample_realizations(prior, PartialRealization.empty(), np.random.default_rng(17), 100_000)
        self.assertAlmostEqual(float((rows[:, 0] == 1).mean()), 0.7, delta=0.01)


class TestConditionalLaws(unittest.TestCase):
    """Conditioning behaves like a probability measure"""

    def setUp(self):
        self.priors = (
            IndependentPrior(((0.2, 0.8), (1.0, 0.0), (0.1, 0.3, 0.6))),
            ExplicitPrior(
                (
                    (Realization((0, 0, 0)), 0.1),
                    (Realization((0, 1, 0)), 0.2),
                    (Realization((0, 1, 1)), 0.3),
                    (Realization((1, 1, 1)), 0.4),
                )
            ),
        )

    def _distribution(self, prior):
        return {phi.states: p for phi, p in enumerate_realizations(prior)}

    def _partial_realizations(self):
        # every item is either unobserved or observed in one of three states
        for choice in itertools.product((None, 0, 1, 2), repeat=3):
            yield PartialRealization.of({e: s for e, s in enumerate(choice) if s is not None})

    def test_conditional_probabilities_sum_to_one(self):
        for prior in self.priors:
            for psi in self._partial_realizations():
                if probability_of(prior, psi) <= 0:
                    continue
                total = math.fsum(self._distribution(condition_prior(prior, psi)).values())
                self.assertAlmostEqual(total, 1.0, msg=repr(psi))

    def test_conditioning_twice_equals_conditioning_once(self):
        histories = (
            (PartialRealization.of({2: 2}), PartialRealization.of({2: 2, 0: 1})),
            (PartialRealization.of({0: 0}), PartialRealization.of({0: 0, 1: 1})),
        )
        for prior, (psi, psi_prime) in zip(self.priors, histories):
            twice = self._distribution(condition_prior(condition_prior(prior, psi), psi_prime))
            once = self._distribution(condition_prior(prior, psi_prime))
            self.assertEqual(set(twice), set(once))
            for states, p in once.items():
                self.assertAlmostEqual(twice[states], p)


if __name__ == "__main__":
    unittest.main()
