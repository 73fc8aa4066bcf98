"""
Tests for the partial-adaptive density greedy policy and its batch budget

The knapsack instance has costs (1, 1, 2), budget 2 and expected item
values 3, 2.5 and 4, so densities are 3, 2.5 and 2.
"""
import math
import unittest

import numpy as np

from pasm.impl.branching import ScriptedChooser
from pasm.impl.environment import RealizationEnvironment
from pasm.impl.marginals import MarginalEngine
from pasm.oracle import audit_batch_semantics, audit_density_trace, exact_expected_utility
from pasm.policies import DensityGreedy, Knapsack, PolicyConfig, batch_budget_T, run_density_greedy
from pasm.types.errors import ConfigurationError
from pasm.types.model import Realization
from pasm.types.trace import TerminationReason
from tests.instances import desk_instances, modular_instance, zero_marginal_instance

HEADS = 0
TAILS = 1


class TestDensityGreedy(unittest.TestCase):
    """Test cases for DensityGreedy"""

    def setUp(self):
        self.instance = modular_instance([3.0, 2.5, 4.0], costs=[1, 1, 2], name="knapsack")
        self.engine = MarginalEngine.for_instance(self.instance)
        self.environment = RealizationEnvironment(self.instance, Realization((1, 1, 1)))

    def _run(self, alpha, script=(), deferred=False):
        policy = DensityGreedy(PolicyConfig(alpha, Knapsack(2.0)), deferred_coins=deferred)
        return policy.execute(self.instance, self.environment, ScriptedChooser(script), self.engine)

    def test_alpha_zero_fills_one_batch_until_the_budget_breaks(self):
        trace = self._run(0.0)
        self.assertEqual([batch.items for batch in trace.batches], [(0, 1)])
        self.assertEqual(trace.termination_reason, TerminationReason.BUDGET_EXHAUSTED)
        self.assertEqual(trace.utility, 11.0)

    def test_alpha_one_reveals_between_selections(self):
        trace = self._run(1.0)
        self.assertEqual([batch.items for batch in trace.batches], [(0,), (1,)])
        self.assertEqual(trace.batches[0].observations, ((0, 1),))
        self.assertEqual(trace.termination_reason, TerminationReason.BUDGET_EXHAUSTED)

    def test_items_outside_the_sample_are_skipped(self):
        trace = self._run(0.0, script=(TAILS,))
        self.assertEqual(trace.selected, (1,))

    def test_empty_sample_selects_nothing(self):
        trace = self._run(0.5, script=(TAILS, TAILS, TAILS))
        self.assertEqual(trace.selected, ())
        self.assertEqual(trace.termination_reason, TerminationReason.GROUND_EXHAUSTED)
        self.assertEqual(trace.utility, 0.0)

    def test_deferred_coins_follow_the_same_trace(self):
        self.assertEqual(self._run(0.0, script=(TAILS,), deferred=True).selected, (1,))
        self.assertEqual(self._run(1.0, deferred=True).selected, (0, 1))

    def test_deferred_coins_give_the_same_expected_value(self):
        for instance in desk_instances(count=6, n=4, knapsack=True):
            config = PolicyConfig(0.5, Knapsack(4.0))
            upfront = exact_expected_utility(DensityGreedy(config), instance)
            deferred = exact_expected_utility(DensityGreedy(config, deferred_coins=True), instance)
            self.assertAlmostEqual(upfront.expected_utility, deferred.expected_utility, places=9)

    def test_no_positive_density(self):
        instance = modular_instance([0.0, 0.0], costs=[1, 1])
        policy = DensityGreedy(PolicyConfig(0.5, Knapsack(2.0)))
        trace = policy.execute(
            instance, RealizationEnvironment(instance, Realization((1, 1))), ScriptedChooser(), MarginalEngine.for_instance(instance)
        )
        self.assertEqual(trace.selected, ())
        self.assertEqual(trace.termination_reason, TerminationReason.NO_POSITIVE_DENSITY)

    def test_zero_cost_item_is_rejected(self):
        instance = modular_instance([1.0, 1.0], costs=[0, 1])
        with self.assertRaises(ConfigurationError):
            run_density_greedy(instance, PolicyConfig(0.5, Knapsack(1.0)), Realization((0, 0)), np.random.default_rng(0))

    def test_zero_marginal_has_no_positive_density(self):
        traces = []
        exact_expected_utility(
            DensityGreedy(PolicyConfig(0.0, Knapsack(1.0))), zero_marginal_instance(), observer=lambda p, t: traces.append(t)
        )
        for trace in traces:
            self.assertEqual(trace.selected, ())
            self.assertIn(
                trace.termination_reason, (TerminationReason.NO_POSITIVE_DENSITY, TerminationReason.GROUND_EXHAUSTED)
            )

    def test_recorded_traces_pass_their_audits(self):
        for instance in desk_instances(count=6, n=4, knapsack=True):
            traces = []
            exact_expected_utility(
                DensityGreedy(PolicyConfig(0.5, Knapsack(4.0))), instance, observer=lambda p, t: traces.append(t)
            )
            for trace in traces:
                self.assertLessEqual(instance.costs.total(trace.selected), 4.0 + 1e-9)
                self.assertTrue(audit_density_trace(trace, instance, 0.5).holds)
                self.assertTrue(audit_batch_semantics(trace).holds)


class TestBatchBudget(unittest.TestCase):
    """Test cases for batch_budget_T"""

    def test_known_value(self):
        T, delta = batch_budget_T(16, 16.0, 1.0, 0.0)
        self.assertEqual(T, 24)
        self.assertAlmostEqual(delta, 0.25)

    def test_budget_equal_to_cheapest_cost_is_degenerate(self):
        T, delta = batch_budget_T(4, 1.0, 1.0, 0.0)
        self.assertEqual(T, 0)
        self.assertTrue(math.isinf(delta))

    def test_budget_grows_with_alpha(self):
        low, _ = batch_budget_T(10, 8.0, 1.0, 0.2)
        high, _ = batch_budget_T(10, 8.0, 1.0, 0.8)
        self.assertGreater(high, low)

    def test_alpha_one_is_rejected(self):
        with self.assertRaises(ConfigurationError):
            batch_budget_T(4, 4.0, 1.0, 1.0)

    def test_budget_below_cheapest_cost_is_rejected(self):
        with self.assertRaises(ConfigurationError):
            batch_budget_T(4, 0.5, 1.0, 0.5)


if __name__ == "__main__":
    unittest.main()
