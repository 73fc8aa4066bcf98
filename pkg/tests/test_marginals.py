"""
Tests for conditional expected marginals of items and policies
"""
import unittest

import numpy as np

from pasm.impl.generators import generate_instance
from pasm.impl.marginals import MarginalEngine, MarginalKind, MarginalMode, marginal_item, marginal_policy
from pasm.impl.realizations import enumerate_realizations, is_consistent
from pasm.policies import Cardinality, FixedSetPolicy, PartialAdaptiveGreedy, PolicyConfig
from pasm.types.errors import ConfigurationError
from pasm.types.model import PartialRealization
from tests.instances import modular_instance, shared_element_instance, zero_marginal_instance


class TestItemMarginals(unittest.TestCase):
    """Test cases for Delta(e | S, psi)"""

    def setUp(self):
        self.instance = shared_element_instance()
        self.engine = MarginalEngine.for_instance(self.instance)

    def test_marginal_on_empty_set(self):
        self.assertAlmostEqual(self.engine.item(1, set(), PartialRealization.empty()), 2.0)

    def test_marginal_shrinks_on_top_of_a_selected_item(self):
        self.assertAlmostEqual(self.engine.item(1, {0}, PartialRealization.empty()), 1.0)

    def test_marginal_depends_on_observations(self):
        self.assertAlmostEqual(self.engine.item(1, {0}, PartialRealization.of({0: 1})), 0.0)
        self.assertAlmostEqual(self.engine.item(1, {0}, PartialRealization.of({0: 0})), 2.0)

    def test_dummy_and_selected_items_are_zero(self):
        self.assertEqual(self.engine.item(7, set(), PartialRealization.empty()), 0.0)
        self.assertEqual(self.engine.item(0, {0}, PartialRealization.empty()), 0.0)

    def test_dummies_do_not_change_marginals(self):
        for psi in (PartialRealization.empty(), PartialRealization.of({0: 1})):
            self.assertEqual(self.engine.item(1, {0, 5}, psi), self.engine.item(1, {0}, psi))
            self.assertEqual(self.engine.item(1, {6}, psi), self.engine.item(1, set(), psi))

    def test_matches_a_sum_over_enumerated_realizations(self):
        instance = generate_instance("weighted_coverage", 3, 2, seed=7)
        engine = MarginalEngine.for_instance(instance)
        realizations = enumerate_realizations(instance.prior)
        for psi in (PartialRealization.empty(), PartialRealization.of({0: 1}), PartialRealization.of({0: 0, 2: 1})):
            consistent = [(phi, p) for phi, p in realizations if is_consistent(phi, psi)]
            mass = sum(p for _, p in consistent)
            for base in (set(), {0}, {0, 2}):
                for item in range(instance.n):
                    expected = sum(
                        p * (instance.utility.evaluate(base | {item}, phi) - instance.utility.evaluate(base, phi))
                        for phi, p in consistent
                    )
                    self.assertAlmostEqual(engine.item(item, base, psi), expected / mass)

    def test_rounding_noise_is_reported_as_zero(self):
        instance = zero_marginal_instance()
        engine = MarginalEngine.for_instance(instance)
        self.assertEqual(engine.item(0, set(), PartialRealization.empty()), 0.0)

    def test_value_is_conditional_expectation(self):
        self.assertAlmostEqual(self.engine.value({0, 1}, PartialRealization.empty()), 3.0)
        self.assertAlmostEqual(self.engine.value({0, 1}, PartialRealization.of({1: 1})), 4.0)

    def test_free_function_matches_engine(self):
        value = marginal_item(self.instance.utility, 1, {0}, PartialRealization.empty(), self.instance.prior)
        self.assertAlmostEqual(value, 1.0)

    def test_listeners_see_every_query(self):
        queries = []
        self.engine.listeners.append(queries.append)
        self.engine.item(1, {0}, PartialRealization.of({0: 1}))
        self.assertEqual(len(queries), 1)
        self.assertEqual(queries[0].item, 1)
        self.assertEqual(queries[0].information_domain, frozenset({0}))


class TestMonteCarloMarginals(unittest.TestCase):
    """Test cases for sampled marginals"""

    def test_sampled_marginal_is_close_to_exact(self):
        instance = shared_element_instance()
        engine = MarginalEngine(
            instance.utility, instance.prior, MarginalMode.monte_carlo(20_000), np.random.default_rng(3)
        )
        self.assertAlmostEqual(engine.item(1, set(), PartialRealization.empty()), 2.0, delta=0.1)

    def test_sampled_marginal_needs_a_stream(self):
        instance = shared_element_instance()
        engine = MarginalEngine(instance.utility, instance.prior, MarginalMode.monte_carlo(10))
        with self.assertRaises(ConfigurationError):
            engine.item(1, set(), PartialRealization.empty())

    def test_sample_count_must_be_positive(self):
        with self.assertRaises(ConfigurationError):
            MarginalMode(MarginalKind.MONTE_CARLO, 0)


class TestPolicyMarginals(unittest.TestCase):
    """Test cases for Delta(pi | S, psi)"""

    def test_fixed_set_matches_item_marginal(self):
        instance = shared_element_instance()
        value = marginal_policy(FixedSetPolicy([1]), instance, {0}, PartialRealization.empty())
        self.assertAlmostEqual(value, 1.0)

    def test_greedy_single_pick_takes_the_best_item(self):
        instance = modular_instance([6.0, 4.0, 1.0])
        policy = PartialAdaptiveGreedy(PolicyConfig(1.0, Cardinality(1)))
        self.assertAlmostEqual(marginal_policy(policy, instance, set(), PartialRealization.empty()), 6.0)

    def test_policy_marginal_on_top_of_observations(self):
        instance = modular_instance([6.0, 4.0, 1.0])
        psi = PartialRealization.of({0: 1})
        value = marginal_policy(FixedSetPolicy([1, 2]), instance, {0}, psi)
        self.assertAlmostEqual(value, 5.0)

    def test_fully_adaptive_greedy_on_two_items(self):
        # both items score 2 at the empty history, so the first pick is either one; if it
        # covers the element the second adds nothing, otherwise the second pick is the other
        # item (worth 2 in expectation) or a dummy with equal chance: 0.5 * 4 + 0.5 * 0.5 * 2
        policy = PartialAdaptiveGreedy(PolicyConfig(1.0, Cardinality(2)))
        value = marginal_policy(policy, shared_element_instance(), set(), PartialRealization.empty())
        self.assertAlmostEqual(value, 2.5)


if __name__ == "__main__":
    unittest.main()
