import unittest
import os
import sys

from hypothesis import given, strategies as st

# Add the application directory to the Python path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.core.arena import ExplicitArena
from src.core.formula import (
    And, Atom, Box, FormulaSyntaxError, Not, UnknownSymbolError,
    diamond, disjunction, format_formula, modal_depth, parse_formula, size,
)

p, q, r = Atom("p"), Atom("q"), Atom("r")

formulas = st.recursive(
    st.sampled_from(["p", "q", "r"]).map(Atom),
    lambda inner: st.one_of(
        inner.map(Not),
        st.tuples(inner, inner).map(lambda pair: And(*pair)),
        st.tuples(st.sampled_from(["a", "b"]), inner).map(lambda pair: Box(*pair)),
    ),
    max_leaves=12,
)


class TestParser(unittest.TestCase):

    def test_sugar_is_desugared(self):
        """Test that disjunction and diamond become negations of conjunction and box."""
        self.assertEqual(parse_formula("p | q"), Not(And(Not(p), Not(q))))
        self.assertEqual(parse_formula("<a>p"), Not(Box("a", Not(p))))
        self.assertEqual(parse_formula("p | q"), disjunction(p, q))
        self.assertEqual(parse_formula("<a>p"), diamond("a", p))

    def test_precedence_and_associativity(self):
        self.assertEqual(parse_formula("p & q | r"), disjunction(And(p, q), r))
        self.assertEqual(parse_formula("p & q & r"), And(And(p, q), r))
        self.assertEqual(parse_formula("!p & q"), And(Not(p), q))
        self.assertEqual(parse_formula("[a]p & q"), And(Box("a", p), q))
        self.assertEqual(parse_formula("[a](p & q)"), Box("a", And(p, q)))
        self.assertEqual(parse_formula("  !!p "), Not(Not(p)))

    def test_syntax_errors_carry_position(self):
        with self.assertRaises(FormulaSyntaxError) as context:
            parse_formula("(p &")
        self.assertEqual(context.exception.position, 4)
        with self.assertRaises(FormulaSyntaxError) as context:
            parse_formula("p $ q")
        self.assertEqual(context.exception.position, 2)
        for text in ("", "p q", "[a p", "<>p", "p)"):
            with self.assertRaises(FormulaSyntaxError):
                parse_formula(text)

    def test_excessive_nesting_is_a_syntax_error(self):
        """Test that nesting past the recursion limit raises FormulaSyntaxError instead of RecursionError."""
        with self.assertRaises(FormulaSyntaxError) as context:
            parse_formula("!" * 5000 + "p")
        self.assertIn("nested too deeply", str(context.exception))
        self.assertEqual(parse_formula("!" * 100 + "p").size, 101)

    def test_names_resolve_against_arena(self):
        arena = ExplicitArena(["p"], ["a"], [("q0", [])], [])
        self.assertEqual(parse_formula("[a]p", arena), Box("a", p))
        with self.assertRaises(UnknownSymbolError) as context:
            parse_formula("[a]p & x", arena)
        self.assertEqual((context.exception.kind, context.exception.name, context.exception.position), ("atom", "x", 7))
        with self.assertRaises(UnknownSymbolError) as context:
            parse_formula("<b>p", arena)
        self.assertEqual(context.exception.kind, "agent")


class TestFormulaShape(unittest.TestCase):

    def test_size_and_modal_depth(self):
        phi = parse_formula("[a](p & [b]!q)")
        self.assertEqual(size(phi), 6)
        self.assertEqual(phi.size, 6)
        self.assertEqual(modal_depth(phi), 2)
        self.assertEqual(modal_depth(p), 0)

    def test_canonical_text(self):
        self.assertEqual(format_formula(parse_formula("p & q & r")), "((p & q) & r)")
        self.assertEqual(format_formula(parse_formula("<a>p")), "![a]!p")
        self.assertEqual(str(Box("a", p)), "[a]p")

    def test_shared_conjunct(self):
        self.assertTrue(And(p, p).shared)
        self.assertFalse(And(p, q).shared)

    @given(formulas)
    def test_canonical_text_parses_back(self, phi):
        """Test that printing and parsing again gives the same formula."""
        self.assertEqual(parse_formula(format_formula(phi)), phi)


if __name__ == '__main__':
    unittest.main()
