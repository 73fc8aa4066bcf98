"""
Tests for the optimal adaptive value oracle

The oracle is compared against a brute-force search over every decision
tree, which is only feasible for a handful of items.
"""
import itertools
import unittest

from pasm.impl.generators import generate_instance
from pasm.impl.realizations import enumerate_realizations
from pasm.oracle import CardinalityValueTable, knapsack_value, optimal_adaptive_value, optimal_first_action
from pasm.types.errors import OracleCapExceeded
from pasm.types.policy_config import Cardinality, Knapsack
from tests.instances import deterministic_instance, desk_instances, modular_instance


def _trees(instance, available, budget, unit_costs):
    yield None
    for item in sorted(available):
        cost = 1.0 if unit_costs else instance.costs(item)
        if cost > budget + 1e-9:
            continue
        labels = instance.states.labels(item)
        subtrees = [list(_trees(instance, available - {item}, budget - cost, unit_costs)) for _ in labels]
        for children in itertools.product(*subtrees):
            yield item, children


def _tree_value(instance, tree, realizations):
    total = 0.0
    for phi, probability in realizations:
        selected, node = [], tree
        while node is not None:
            item, children = node
            selected.append(item)
            node = children[phi[item]]
        total += probability * instance.utility.evaluate(selected, phi)
    return total


def brute_force_value(instance, budget, unit_costs=False):
    realizations = enumerate_realizations(instance.prior)
    return max(
        _tree_value(instance, tree, realizations)
        for tree in _trees(instance, frozenset(range(instance.n)), budget, unit_costs)
    )


class TestOptimalAdaptiveValue(unittest.TestCase):
    """Test cases for optimal_adaptive_value"""

    def test_matches_brute_force_under_cardinality(self):
        for instance in desk_instances(count=6, n=3):
            for k in (1, 2):
                expected = brute_force_value(instance, k, unit_costs=True)
                self.assertAlmostEqual(optimal_adaptive_value(instance, Cardinality(k)), expected, places=9)

    def test_matches_brute_force_under_knapsack(self):
        for instance in desk_instances(count=6, n=3, knapsack=True):
            expected = brute_force_value(instance, 3.0)
            self.assertAlmostEqual(optimal_adaptive_value(instance, Knapsack(3.0)), expected, places=9)

    def test_four_items(self):
        instance = desk_instances(count=1, n=4)[0]
        self.assertAlmostEqual(optimal_adaptive_value(instance, Cardinality(2)), brute_force_value(instance, 2, True), places=9)

    def test_unit_knapsack_equals_cardinality(self):
        for instance in desk_instances(count=3, n=4):
            self.assertAlmostEqual(
                knapsack_value(instance, 2.0, unit_costs=True), optimal_adaptive_value(instance, Cardinality(2)), places=9
            )

    def test_zero_selections(self):
        instance = modular_instance([6.0, 4.0])
        self.assertEqual(CardinalityValueTable(instance, 0).value(), 0.0)
        self.assertEqual(optimal_adaptive_value(instance, Cardinality(0)), 0.0)

    def test_budget_below_every_cost(self):
        instance = modular_instance([6.0, 4.0], costs=[2, 3])
        self.assertEqual(optimal_adaptive_value(instance, Knapsack(1.0)), 0.0)

    def test_stopping_beats_a_harmful_item(self):
        instance = deterministic_instance([1.0], penalties=[3.0])
        self.assertEqual(optimal_adaptive_value(instance, Cardinality(1)), 0.0)
        self.assertIsNone(optimal_first_action(instance, Cardinality(1)).item)

    def test_modular_optimum_takes_the_best_items(self):
        self.assertAlmostEqual(optimal_adaptive_value(modular_instance([6.0, 4.0, 1.0]), Cardinality(2)), 10.0)

    def test_too_many_items(self):
        instance = generate_instance("weighted_coverage", 9, 2, seed=0)
        with self.assertRaises(OracleCapExceeded):
            optimal_adaptive_value(instance, Cardinality(2))


class TestOptimalFirstAction(unittest.TestCase):
    """Test cases for optimal_first_action"""

    def test_first_action_and_continuations(self):
        action = optimal_first_action(modular_instance([6.0, 4.0, 1.0]), Cardinality(1))
        self.assertEqual(action.item, 0)
        self.assertAlmostEqual(action.value, 6.0)
        self.assertEqual([o.state for o in action.outcomes], [0, 1])
        self.assertEqual([o.continuation for o in action.outcomes], [0.0, 12.0])
        self.assertAlmostEqual(sum(o.probability for o in action.outcomes), 1.0)

    def test_serializes_to_plain_types(self):
        document = optimal_first_action(modular_instance([6.0]), Cardinality(1)).to_dict()
        self.assertEqual(document["item"], 0)
        self.assertEqual(len(document["outcomes"]), 2)


if __name__ == "__main__":
    unittest.main()
