import unittest
import os
import sys

# Add the application directory to the Python path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.core.arena import ArenaError, ExplicitArena
from src.core.cost import DEPTH, INFINITY, QUERY_COUNT, WEIGHTED, Polarity, proof_cost
from src.core.formula import parse_formula
from src.core.oracle import MinimalCostTable, all_labels, enumerate_proofs, min_cost, naive_model_check
from src.core.proof import check_proof


def a1_arena():
    return ExplicitArena(
        atoms=["p"],
        agents=["a"],
        states=[("q0", []), ("q1", ["p"]), ("q2", [])],
        transitions=[("q0", "a", "q1"), ("q0", "a", "q2")],
    )


class TestNaiveModelCheck(unittest.TestCase):

    def setUp(self):
        self.arena = a1_arena()

    def test_examples(self):
        self.assertFalse(naive_model_check(self.arena, "q0", parse_formula("[a]p")))
        self.assertTrue(naive_model_check(self.arena, "q0", parse_formula("<a>p")))
        self.assertTrue(naive_model_check(self.arena, "q1", parse_formula("[a]p")))
        self.assertFalse(naive_model_check(self.arena, "q1", parse_formula("<a>p")))
        self.assertFalse(naive_model_check(self.arena, "q0", parse_formula("p & !p")))
        self.assertTrue(naive_model_check(self.arena, "q0", parse_formula("p | !p")))


class TestMinCost(unittest.TestCase):

    def setUp(self):
        self.arena = a1_arena()

    def test_box(self):
        result = min_cost(self.arena, "q0", parse_formula("[a]p"), QUERY_COUNT)
        self.assertFalse(result.holds)
        self.assertEqual(result.min_disproof_cost, 1.0)
        self.assertEqual(result.min_proof_cost, INFINITY)

    def test_diamond(self):
        result = min_cost(self.arena, "q0", parse_formula("<a>p"), QUERY_COUNT)
        self.assertTrue(result.holds)
        self.assertEqual(result.min_proof_cost, 1.0)
        self.assertEqual(result.min_disproof_cost, INFINITY)

    def test_models_disagree_on_cost(self):
        """Test that the same formula has different minimal costs under different models."""
        phi = parse_formula("[a]p")
        self.assertEqual(min_cost(self.arena, "q0", phi, DEPTH).min_disproof_cost, 1.0)
        self.assertEqual(min_cost(self.arena, "q0", phi, WEIGHTED).min_disproof_cost, 2.0)
        self.assertEqual(min_cost(self.arena, "q1", phi, DEPTH).min_proof_cost, 1.0)
        self.assertEqual(min_cost(self.arena, "q1", phi, QUERY_COUNT).min_proof_cost, 0.0)

    def test_shared_conjunct(self):
        result = min_cost(self.arena, "q1", parse_formula("p & p"), QUERY_COUNT)
        self.assertEqual(result.min_proof_cost, 2.0)

    def test_table_is_memoized(self):
        """Test that each (state, formula) pair is computed once."""
        table = MinimalCostTable(self.arena, QUERY_COUNT)
        phi = parse_formula("[a]p")
        self.assertEqual(table.min_cost("q0", phi, Polarity.DISPROOF), 1.0)
        self.assertEqual(table.min_cost("q0", phi, Polarity.PROOF), INFINITY)
        self.assertIn(("q2", phi.body), table._disproof)

    def test_unknown_state(self):
        with self.assertRaises(ArenaError):
            min_cost(self.arena, "q5", parse_formula("p"), DEPTH)


class TestEnumeration(unittest.TestCase):

    def setUp(self):
        self.arena = a1_arena()

    def test_box(self):
        enumeration = enumerate_proofs(self.arena, "q0", parse_formula("[a]p"), 10)
        self.assertEqual(enumeration.proofs, [])
        self.assertEqual(len(enumeration.disproofs), 1)
        self.assertEqual(enumeration.disproofs[0].children[0].state, "q2")
        self.assertFalse(enumeration.truncated)

    def test_truncation(self):
        """Test that a bound below the smallest proof marks the enumeration truncated."""
        enumeration = enumerate_proofs(self.arena, "q0", parse_formula("[a]p"), 1)
        self.assertEqual(enumeration.disproofs, [])
        self.assertTrue(enumeration.truncated)

    def test_every_enumerated_tree_checks_and_the_cheapest_is_minimal(self):
        arena = ExplicitArena(["p", "q"], ["a"],
                              [("s0", ["p"]), ("s1", ["q"]), ("s2", ["p", "q"])],
                              [("s0", "a", "s1"), ("s0", "a", "s2"), ("s1", "a", "s2")])
        phi = parse_formula("!(p & q) | [a](p | q)")
        enumeration = enumerate_proofs(arena, "s0", phi, 40)
        self.assertFalse(enumeration.truncated)
        self.assertGreater(len(enumeration.proofs), 1)
        for tree in enumeration.proofs:
            self.assertTrue(check_proof(arena, tree))
        for model in (DEPTH, QUERY_COUNT, WEIGHTED):
            cheapest = min(proof_cost(model, tree) for tree in enumeration.proofs)
            self.assertEqual(cheapest, min_cost(arena, "s0", phi, model).min_proof_cost)

    def test_all_labels(self):
        """Test that every reachable label is listed once, starting from the root."""
        labels = all_labels(self.arena, "q0", parse_formula("[a]p & p"))
        self.assertEqual(len(labels), 5)
        self.assertEqual(labels[0][0], "q0")


if __name__ == '__main__':
    unittest.main()
