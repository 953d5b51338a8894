import unittest
import math
import os
import sys

from hypothesis import given, strategies as st

# Add the application directory to the Python path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.core.cost import (
    BUILTIN_MODELS, DEPTH, INFINITY, QUERY_COUNT, WEIGHTED, CostConfigError, CostModel, Polarity,
    aggregator_violations, conjunction_inputs, describe_weights, format_cost, heuristic_disproof, heuristic_proof,
    load_cost_model, proof_cost, weighted_model,
)
from src.core.formula import And, Atom, Box, Not, parse_formula
from src.core.proof import ProofTree

# Halves keep sums exact
costs = st.one_of(st.integers(min_value=0, max_value=20).map(lambda n: n / 2), st.just(INFINITY))


class TestHeuristics(unittest.TestCase):

    def test_box_heuristics(self):
        """Test the initial effort numbers of a box leaf under each model."""
        phi = parse_formula("[a]p")
        self.assertEqual((heuristic_proof(DEPTH, phi), heuristic_disproof(DEPTH, phi)), (1.0, 1.0))
        self.assertEqual((heuristic_proof(QUERY_COUNT, phi), heuristic_disproof(QUERY_COUNT, phi)), (0.0, 1.0))
        self.assertEqual((heuristic_proof(WEIGHTED, phi), heuristic_disproof(WEIGHTED, phi)), (1.0, 2.0))

    def test_negation_swaps(self):
        phi = parse_formula("![a]p")
        self.assertEqual(heuristic_proof(QUERY_COUNT, phi), heuristic_disproof(QUERY_COUNT, phi.body))
        self.assertEqual(heuristic_disproof(QUERY_COUNT, phi), heuristic_proof(QUERY_COUNT, phi.body))

    def test_conjunction(self):
        """Test that conjunction heuristics aggregate both conjuncts for proofs and the cheaper one for disproofs."""
        phi = parse_formula("p & [a]q")
        self.assertEqual(heuristic_proof(QUERY_COUNT, phi), 1.0)
        self.assertEqual(heuristic_disproof(QUERY_COUNT, phi), 1.0)
        self.assertEqual(heuristic_proof(DEPTH, phi), 1.0)
        self.assertEqual(heuristic_disproof(DEPTH, phi), 0.0)


class TestCostModels(unittest.TestCase):

    def test_builtin_aggregators(self):
        self.assertEqual(DEPTH.agg_box("a", []), 1.0)
        self.assertEqual(DEPTH.agg_box("a", [2.0, 0.0]), 3.0)
        self.assertEqual(DEPTH.agg_conj([]), 0.0)
        self.assertEqual(QUERY_COUNT.agg_conj([1.0, 2.0]), 3.0)
        self.assertEqual(QUERY_COUNT.agg_box("a", []), 0.0)
        self.assertEqual(QUERY_COUNT.agg_box("a", [1.0, INFINITY]), INFINITY)
        self.assertEqual(set(BUILTIN_MODELS), {"depth", "query_count", "weighted"})

    def test_weighted_tables(self):
        model = weighted_model({"p": 2.5}, {"b": 4})
        self.assertEqual(model.base_cost("p"), 2.5)
        self.assertEqual(model.base_cost("q"), 1.0)
        self.assertEqual(model.agg_box("b", [1.0, 1.0]), 6.0)
        with self.assertRaises(CostConfigError):
            weighted_model({"p": -1})
        with self.assertRaises(CostConfigError):
            weighted_model(box_costs={"a": math.inf})
        with self.assertRaises(CostConfigError):
            weighted_model({"p": True})

    def test_load_cost_model(self):
        self.assertIs(load_cost_model({"model": "depth"}), DEPTH)
        model = load_cost_model({"model": "weighted", "atom_costs": {"p": 3}})
        self.assertEqual(model.base_cost("p"), 3.0)
        self.assertEqual(model.settings["atom_costs"], {"p": 3})
        self.assertEqual(describe_weights(model), "atom p=3")
        for config in ({"model": "nope"}, {"model": "depth", "atom_costs": {}}, [], {"model": "weighted", "box_costs": []}):
            with self.assertRaises(CostConfigError):
                load_cost_model(config)

    def test_describe_weights(self):
        """Test that only explicitly configured weights are listed, sorted by name."""
        model = weighted_model({"q": 0.5, "p": 2}, {"b": 4})
        self.assertEqual(describe_weights(model), "atom p=2, q=0.5; box b=4")
        self.assertEqual(describe_weights(weighted_model(box_costs={"a": 3})), "box a=3")
        self.assertEqual(describe_weights(WEIGHTED), "")
        self.assertEqual(describe_weights(DEPTH), "")

    def test_format_cost(self):
        self.assertEqual(format_cost(INFINITY), "inf")
        self.assertEqual(format_cost(2.0), "2")
        self.assertEqual(format_cost(0), "0")
        self.assertEqual(format_cost(1.5), "1.5")

    @given(st.sampled_from(sorted(BUILTIN_MODELS)), st.lists(costs, max_size=6), costs, costs)
    def test_aggregator_axioms(self, name, multiset, x, y):
        """Test that builtin aggregators are increasing, absorb inf, keep finite sums finite and ignore order."""
        x, y = sorted((x, y))
        self.assertEqual(aggregator_violations(BUILTIN_MODELS[name], "a", multiset, x, y), [])

    def test_axiom_checker_flags_bad_aggregator(self):
        broken = CostModel("broken", DEPTH.base_cost, lambda xs: -float(sum(xs)), DEPTH.agg_box)
        self.assertIn("conjunction: increasing", aggregator_violations(broken, "a", [1.0], 2.0, 3.0))


class TestProofCost(unittest.TestCase):

    def test_disproof_of_box(self):
        tree = ProofTree("q0", Box("a", Atom("p")), Polarity.DISPROOF,
                         (ProofTree("q2", Atom("p"), Polarity.DISPROOF),))
        self.assertEqual(proof_cost(QUERY_COUNT, tree), 1.0)
        self.assertEqual(proof_cost(DEPTH, tree), 1.0)
        self.assertEqual(proof_cost(WEIGHTED, tree), 2.0)

    def test_vacuous_box_and_negation(self):
        """Test costs of a childless box proof wrapped in a negation."""
        tree = ProofTree("q1", Not(Box("a", Atom("p"))), Polarity.DISPROOF,
                         (ProofTree("q1", Box("a", Atom("p")), Polarity.PROOF),))
        self.assertEqual(proof_cost(DEPTH, tree), 1.0)
        self.assertEqual(proof_cost(QUERY_COUNT, tree), 0.0)

    def test_shared_conjunct_counts_twice(self):
        phi = And(Atom("p"), Atom("p"))
        self.assertEqual(conjunction_inputs(phi, Polarity.PROOF, [1.0]), [1.0, 1.0])
        self.assertEqual(conjunction_inputs(phi, Polarity.DISPROOF, [1.0]), [1.0])
        tree = ProofTree("q1", phi, Polarity.PROOF, (ProofTree("q1", Atom("p"), Polarity.PROOF),))
        self.assertEqual(proof_cost(QUERY_COUNT, tree), 2.0)


if __name__ == '__main__':
    unittest.main()
