import unittest
import os
import sys

import pydot

# Add the application directory to the Python path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.core.arena import ExplicitArena
from src.core.cost import DEPTH, QUERY_COUNT, Polarity, proof_cost
from src.core.engine import SearchError, SearchNode, mps_solve
from src.core.formula import And, Atom, Box, Not, parse_formula
from src.core.proof import ProofFormatError, ProofTree, check_proof, extract, parse_proof, proof_graph, serialize_proof

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), 'golden')

P = Atom("p")
BOX = Box("a", P)
PROOF, DISPROOF = Polarity.PROOF, Polarity.DISPROOF


def a1_arena():
    return ExplicitArena(
        atoms=["p"],
        agents=["a"],
        states=[("q0", []), ("q1", ["p"]), ("q2", [])],
        transitions=[("q0", "a", "q1"), ("q0", "a", "q2")],
    )


class TestExtract(unittest.TestCase):

    def setUp(self):
        self.arena = a1_arena()

    def test_box_disproof(self):
        result = mps_solve(self.arena, "q0", BOX, QUERY_COUNT)
        tree = extract(QUERY_COUNT, result.root)
        self.assertEqual(tree, ProofTree("q0", BOX, DISPROOF, (ProofTree("q2", P, DISPROOF),)))
        self.assertEqual(proof_cost(QUERY_COUNT, tree), result.cost)
        self.assertTrue(check_proof(self.arena, tree))

    def test_diamond_proof_flips_polarity(self):
        """Test that a diamond proof holds a box disproof below its negation."""
        phi = parse_formula("<a>p")
        result = mps_solve(self.arena, "q0", phi, QUERY_COUNT)
        tree = extract(QUERY_COUNT, result.root)
        self.assertEqual(tree.polarity, PROOF)
        self.assertEqual(tree.children[0].polarity, DISPROOF)
        self.assertEqual(tree.children[0].children[0].state, "q1")
        self.assertEqual(tree.node_count(), 4)
        self.assertTrue(check_proof(self.arena, tree))

    def test_vacuous_box_and_atom(self):
        result = mps_solve(self.arena, "q1", BOX, DEPTH)
        self.assertEqual(extract(DEPTH, result.root), ProofTree("q1", BOX, PROOF))
        result = mps_solve(self.arena, "q1", P, DEPTH)
        self.assertEqual(extract(DEPTH, result.root), ProofTree("q1", P, PROOF))

    def test_unsolved_root(self):
        """Test that extraction refuses an unsolved tree."""
        root = SearchNode(("q0", BOX), (1.0, 1.0))
        with self.assertRaises(SearchError):
            extract(DEPTH, root)


class TestCheckProof(unittest.TestCase):

    def setUp(self):
        self.arena = a1_arena()

    def assertRejected(self, tree, reason, path=()):
        verdict = check_proof(self.arena, tree)
        self.assertFalse(verdict)
        self.assertEqual((verdict.reason, verdict.path), (reason, path))

    def test_atoms(self):
        self.assertTrue(check_proof(self.arena, ProofTree("q1", P, PROOF)))
        self.assertRejected(ProofTree("q0", P, PROOF), "atom not in labels")
        self.assertRejected(ProofTree("q1", P, DISPROOF), "atom in labels")
        self.assertRejected(ProofTree("q1", P, PROOF, (ProofTree("q1", P, PROOF),)), "atom node has children")

    def test_box_proofs(self):
        self.assertRejected(ProofTree("q0", BOX, PROOF, (ProofTree("q1", P, PROOF),)), "missing successor")
        self.assertRejected(
            ProofTree("q0", BOX, PROOF, (ProofTree("q1", P, PROOF), ProofTree("q2", P, PROOF))),
            "atom not in labels", (1,),
        )
        self.assertTrue(check_proof(self.arena, ProofTree("q1", BOX, PROOF)))

    def test_box_disproofs(self):
        self.assertRejected(ProofTree("q0", BOX, DISPROOF, (ProofTree("q1", P, DISPROOF),)), "atom in labels", (0,))
        self.assertRejected(ProofTree("q0", BOX, DISPROOF, (ProofTree("q0", P, DISPROOF),)), "child is not a successor", (0,))
        self.assertRejected(ProofTree("q0", BOX, DISPROOF), "box disproof needs exactly one child")
        self.assertRejected(ProofTree("q0", BOX, DISPROOF, (ProofTree("q2", P, PROOF),)), "child polarity mismatch", (0,))

    def test_negation_and_conjunction(self):
        self.assertTrue(check_proof(self.arena, ProofTree("q0", Not(P), PROOF, (ProofTree("q0", P, DISPROOF),))))
        self.assertRejected(ProofTree("q0", Not(P), PROOF), "negation needs exactly one child")
        conj = And(P, Not(P))
        self.assertRejected(ProofTree("q1", conj, PROOF, (ProofTree("q1", P, PROOF),)),
                            "conjunction proof must cover both conjuncts")
        self.assertTrue(check_proof(self.arena, ProofTree("q1", conj, DISPROOF, (
            ProofTree("q1", Not(P), DISPROOF, (ProofTree("q1", P, PROOF),)),))))
        self.assertRejected(ProofTree("q1", conj, DISPROOF, (ProofTree("q1", Atom("r"), DISPROOF),)),
                            "child label mismatch", (0,))
        shared = And(P, P)
        self.assertTrue(check_proof(self.arena, ProofTree("q1", shared, PROOF, (ProofTree("q1", P, PROOF),))))

    def test_unknown_state_is_reported(self):
        """Test that arena failures become a rejection reason instead of an exception."""
        verdict = check_proof(self.arena, ProofTree("q7", P, PROOF))
        self.assertFalse(verdict)
        self.assertTrue(verdict.reason.startswith("arena query failed"))


class TestSerialization(unittest.TestCase):

    def setUp(self):
        self.tree = ProofTree("q0", BOX, DISPROOF, (ProofTree("q2", P, DISPROOF),))

    def test_structured_matches_golden(self):
        with open(os.path.join(GOLDEN_DIR, 'proof_a1_box_query_count.json'), encoding='utf-8') as f:
            self.assertEqual(serialize_proof(self.tree, "structured"), f.read())

    def test_structured_parses_back(self):
        text = serialize_proof(self.tree, "structured")
        self.assertEqual(parse_proof(text), self.tree)
        self.assertEqual(parse_proof(text, a1_arena()), self.tree)

    def test_dot(self):
        text = serialize_proof(self.tree, "dot", QUERY_COUNT)
        self.assertIn("digraph proof", text)
        self.assertIn("q0 ⊭ [a]p (cost 1)", text)
        self.assertIn("n0 -> n1", text)
        self.assertIn("ellipse", text)

    def test_dot_escapes_quotes_in_state_ids(self):
        """Test that DOT output stays parseable when state ids contain quotes or backslashes."""
        arena = ExplicitArena(["p"], ["a"], [('s"0', []), ('s\\1', ["p"])], [('s"0', "a", 's\\1')])
        for formula in ("p", "<a>p"):
            with self.subTest(formula=formula):
                result = mps_solve(arena, 's"0', parse_formula(formula, arena), QUERY_COUNT)
                text = serialize_proof(extract(QUERY_COUNT, result.root), "dot", QUERY_COUNT)
                graphs = pydot.graph_from_dot_data(text)
                self.assertIsNotNone(graphs)
                self.assertEqual(len(graphs), 1)
                label = graphs[0].get_node("n0")[0].get("label")
                self.assertIn('s\\"0', label)
        self.assertIn('s\\\\1 ⊨ p', text)

    def test_graph(self):
        graph = proof_graph(self.tree, DEPTH)
        self.assertEqual(list(graph.nodes()), ["n0", "n1"])
        self.assertEqual(graph.nodes["n1"]["label"], "q2 ⊭ p (cost 0)")
        self.assertEqual(graph.nodes["n1"]["depth"], 1)

    def test_errors(self):
        with self.assertRaises(ProofFormatError):
            serialize_proof(self.tree, "yaml")
        for text in ("{", "[]", '{"state": "q0"}',
                     '{"state": "q0", "formula": "(p", "polarity": "proof", "children": []}',
                     '{"state": "q0", "formula": "p", "polarity": "maybe", "children": []}',
                     '{"state": "q0", "formula": "p", "polarity": "proof", "children": {}}'):
            with self.assertRaises(ProofFormatError):
                parse_proof(text)


if __name__ == '__main__':
    unittest.main()
