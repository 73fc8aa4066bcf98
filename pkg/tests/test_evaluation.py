"""
Tests for exact and Monte-Carlo policy evaluation
"""
import unittest

from pasm.domain.services import evaluate_policy
from pasm.oracle import exact_expected_utility, mc_expected_utility
from pasm.policies import Cardinality, FixedSetPolicy, PartialAdaptiveGreedy, PolicyConfig
from pasm.types.errors import ConfigurationError
from pasm.types.reports import EvaluationMethod
from tests.instances import deterministic_instance, desk_instances, modular_instance


class TestExactEvaluation(unittest.TestCase):
    """Test cases for exact_expected_utility"""

    def setUp(self):
        self.instance = modular_instance([6.0, 4.0, 1.0])

    def test_empty_policy_is_worth_nothing(self):
        report = exact_expected_utility(FixedSetPolicy(), self.instance)
        self.assertEqual(report.expected_utility, 0.0)
        self.assertEqual(report.max_batches, 0)

    def test_fixed_set_is_its_expected_value(self):
        report = exact_expected_utility(FixedSetPolicy([0, 2]), self.instance)
        self.assertAlmostEqual(report.expected_utility, 7.0)
        self.assertEqual(report.stderr, 0.0)
        self.assertEqual(report.method, EvaluationMethod.EXACT)

    def test_randomized_policy(self):
        report = exact_expected_utility(PartialAdaptiveGreedy(PolicyConfig(0.0, Cardinality(2))), self.instance)
        self.assertAlmostEqual(report.expected_utility, 8.0)


class TestMonteCarloEvaluation(unittest.TestCase):
    """Test cases for mc_expected_utility"""

    def test_single_trial_has_no_error_estimate(self):
        instance = deterministic_instance([2.0, 3.0])
        report = mc_expected_utility(FixedSetPolicy([1]), instance, trials=1, seed=0)
        self.assertEqual(report.expected_utility, 3.0)
        self.assertEqual(report.stderr, 0.0)
        self.assertEqual(report.method, EvaluationMethod.MONTE_CARLO)

    def test_trials_must_be_positive(self):
        with self.assertRaises(ConfigurationError):
            mc_expected_utility(FixedSetPolicy(), deterministic_instance([1.0]), trials=0, seed=0)

    def test_same_seed_same_estimate(self):
        instance = modular_instance([6.0, 4.0, 1.0])
        policy = PartialAdaptiveGreedy(PolicyConfig(0.5, Cardinality(2)))
        first = mc_expected_utility(policy, instance, trials=50, seed=7)
        second = mc_expected_utility(policy, instance, trials=50, seed=7)
        self.assertEqual(first, second)

    def test_estimate_agrees_with_exact_value(self):
        for instance in desk_instances(count=3, n=4):
            policy = PartialAdaptiveGreedy(PolicyConfig(0.5, Cardinality(2)))
            exact = exact_expected_utility(policy, instance).expected_utility
            sampled = mc_expected_utility(policy, instance, trials=2000, seed=1)
            self.assertLessEqual(abs(sampled.expected_utility - exact), 5 * sampled.stderr + 1e-9)

    def test_evaluate_policy_prefers_exact(self):
        report = evaluate_policy(FixedSetPolicy([0]), modular_instance([6.0]))
        self.assertEqual(report.method, EvaluationMethod.EXACT)
        report = evaluate_policy(FixedSetPolicy([0]), modular_instance([6.0]), method="mc", trials=10)
        self.assertEqual(report.method, EvaluationMethod.MONTE_CARLO)


if __name__ == "__main__":
    unittest.main()
