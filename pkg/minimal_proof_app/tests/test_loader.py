import unittest
import json
import os
import sys
import tempfile

# Add the application directory to the Python path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.core.arena import ArenaError, ArenaSyntaxError
from src.core.cost import DEPTH, QUERY_COUNT, CostConfigError
from src.data.loader import dump_arena, load_arena, load_arena_file, load_cost_option
from src.utils.validators import validate_arena_document, validate_cost_config

SAMPLE_DIR = os.path.join(os.path.dirname(__file__), '..', 'data', 'sample_data')


class TestArenaLoading(unittest.TestCase):

    def setUp(self):
        self.arena = load_arena_file(os.path.join(SAMPLE_DIR, 'a1_arena.json'))

    def test_sample_arena(self):
        self.assertEqual(self.arena.states, ("q0", "q1", "q2"))
        self.assertEqual(self.arena.successors("q0", "a"), ("q1", "q2"))
        self.assertEqual(self.arena.labels("q1"), frozenset({"p"}))

    def test_dump_then_load_is_identity(self):
        text = dump_arena(self.arena)
        self.assertEqual(load_arena(text), self.arena)
        self.assertEqual(dump_arena(load_arena(text)), text)

    def test_two_agent_sample(self):
        arena = load_arena_file(os.path.join(SAMPLE_DIR, 'two_agent_arena.json'))
        self.assertEqual(arena.agents, ("max", "min"))
        self.assertEqual(arena.successors("s0", "max"), ("s1", "s2", "s5"))
        self.assertEqual(arena.successors("s0", "min"), ())

    def test_syntax_error_position(self):
        """Test that malformed JSON reports line and column."""
        with self.assertRaises(ArenaSyntaxError) as context:
            load_arena('{"atoms": ["p"],\n "agents": ["a"] x}')
        self.assertEqual(context.exception.line, 2)
        self.assertEqual(context.exception.column, 18)

    def test_semantic_errors(self):
        doc = json.loads(dump_arena(self.arena))
        doc["transitions"].append({"from": "q0", "agent": "b", "to": "q1"})
        with self.assertRaisesRegex(ArenaError, "undeclared agent 'b'"):
            load_arena(json.dumps(doc))
        with self.assertRaises(ArenaError):
            load_arena_file(os.path.join(SAMPLE_DIR, 'missing.json'))
        doc = json.loads(dump_arena(self.arena))
        doc["agents"] = []
        doc["transitions"] = []
        with self.assertRaisesRegex(ArenaError, "agents"):
            load_arena(json.dumps(doc))

    def test_validator_lists_every_problem(self):
        """Test that the validator collects all errors instead of stopping at the first."""
        doc = {
            "atoms": [],
            "agents": ["a", "a"],
            "states": [{"id": "q0", "labels": ["r"]}],
            "transitions": [{"from": "q0", "agent": "a", "to": "q7"}],
        }
        is_valid, errors = validate_arena_document(doc)
        self.assertFalse(is_valid)
        self.assertEqual(len(errors), 4)
        self.assertFalse(validate_arena_document([])[0])
        self.assertIn("Missing required fields: transitions", validate_arena_document({"atoms": [], "agents": [], "states": []})[1][0])


class TestCostOptions(unittest.TestCase):

    def test_builtin_names(self):
        self.assertIs(load_cost_option("depth"), DEPTH)
        self.assertIs(load_cost_option("query_count"), QUERY_COUNT)
        self.assertEqual(load_cost_option("weighted").base_cost("p"), 1.0)

    def test_weighted_file(self):
        model = load_cost_option("weighted:" + os.path.join(SAMPLE_DIR, 'weighted_costs.json'))
        self.assertEqual(model.base_cost("p"), 2.0)
        self.assertEqual(model.agg_box("a", [1.0]), 4.0)
        self.assertEqual(model.agg_box("b", []), 1.0)

    def test_invalid_options(self):
        for option in ("bogus", "depth:x.json", "weighted:/nonexistent/costs.json"):
            with self.assertRaises(CostConfigError):
                load_cost_option(option)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'costs.json')
            with open(path, 'w', encoding='utf-8') as f:
                json.dump({"atom_costs": {"p": -1}}, f)
            with self.assertRaisesRegex(CostConfigError, "non-negative"):
                load_cost_option("weighted:" + path)

    def test_cost_validator(self):
        self.assertEqual(validate_cost_config({"model": "depth"}), (True, []))
        is_valid, errors = validate_cost_config({"model": "depth", "atom_costs": {"p": "x"}})
        self.assertFalse(is_valid)
        self.assertEqual(len(errors), 2)


if __name__ == '__main__':
    unittest.main()
