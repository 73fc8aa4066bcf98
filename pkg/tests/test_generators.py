"""
Tests for the seeded instance generators
"""
import unittest

from pasm.impl.generators import FAMILIES, generate_instance
from pasm.impl.marginals import MarginalEngine
from pasm.impl.realizations import enumerate_realizations
from pasm.oracle import check_adaptive_monotonicity, check_adaptive_submodularity
from pasm.types.errors import ConfigurationError, UnknownFamilyError
from pasm.types.model import PartialRealization


class TestGenerators(unittest.TestCase):
    """Test cases for generate_instance"""

    def test_same_seed_same_instance(self):
        for family in FAMILIES:
            self.assertEqual(generate_instance(family, 4, 3, seed=8), generate_instance(family, 4, 3, seed=8))

    def test_different_seeds_differ(self):
        self.assertNotEqual(
            generate_instance("weighted_coverage", 4, 2, seed=1).utility,
            generate_instance("weighted_coverage", 4, 2, seed=2).utility,
        )

    def test_name_records_the_parameters(self):
        self.assertEqual(generate_instance("version_space", 3, 2, seed=4).name, "version_space-n3-s2-seed4")

    def test_knapsack_costs(self):
        instance = generate_instance("weighted_coverage", 6, 2, seed=3, params={"knapsack": True})
        self.assertTrue(all(c in (1.0, 2.0, 3.0) for c in instance.costs.costs))
        self.assertEqual(generate_instance("weighted_coverage", 6, 2, seed=3).costs.costs, (1.0,) * 6)

    def test_coverage_is_monotone_and_submodular(self):
        instance = generate_instance("weighted_coverage", 3, 2, seed=7)
        self.assertTrue(check_adaptive_monotonicity(instance).holds)
        self.assertTrue(check_adaptive_submodularity(instance).holds)

    def test_penalty_family_has_a_harmful_item(self):
        instance = generate_instance("coverage_penalty", 4, 2, seed=2)
        engine = MarginalEngine.for_instance(instance)
        marginals = [engine.item(e, set(), PartialRealization.empty()) for e in range(instance.n)]
        self.assertLess(min(marginals), 0.0)

    def test_version_space_prior_matches_hypothesis_masses(self):
        instance = generate_instance("version_space", 4, 2, seed=6, params={"hypotheses": 5})
        realizations = enumerate_realizations(instance.prior)
        self.assertEqual(len(realizations), 5)
        self.assertEqual(len({phi for phi, _ in realizations}), 5)
        self.assertAlmostEqual(sum(p for _, p in realizations), 1.0)

    def test_unknown_family(self):
        with self.assertRaises(UnknownFamilyError):
            generate_instance("matroid", 3, 2, seed=0)

    def test_empty_ground_set(self):
        with self.assertRaises(ConfigurationError):
            generate_instance("weighted_coverage", 0, 2, seed=0)


if __name__ == "__main__":
    unittest.main()
