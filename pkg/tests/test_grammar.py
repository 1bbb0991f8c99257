import random

import pytest

from conftest import random_iu_type, random_term
from lammu.grammar import (LanguageViolation, ParseError, parse_judgment,
                           parse_term, parse_type, print_judgment, print_term,
                           print_type)
from lammu.syntax import Abs, App, Mu, Var, alpha_eq
from lammu.typelang import (Arrow, Bottom, Inter, Top, TVar, Union,
                            canonicalize, well_formed)

A, B = TVar("A"), TVar("B")


class TestTermParsing:
    def test_application_associates_left(self):
        assert parse_term("x y z") == App(App(Var("x"), Var("y")), Var("z"))

    def test_abstraction_extends_right(self):
        assert parse_term("\\x.x y") == Abs("x", App(Var("x"), Var("y")))

    def test_unicode_synonyms(self):
        assert parse_term("λx.x") == parse_term("\\x.x")
        assert parse_term("μa.[a] x") == parse_term("mu a.[a] x")

    def test_mu_binds_its_own_name(self):
        assert parse_term("mu a.[a] x") == Mu("a", "a", Var("x"))
        assert parse_term("mu a.['b] x") == Mu("a", "b", Var("x"))

    def test_unbound_name_needs_tick(self):
        with pytest.raises(ParseError) as e:
            parse_term("mu a.[b] x")
        assert "'b" in str(e.value)

    def test_parse_error_has_span(self):
        with pytest.raises(ParseError) as e:
            parse_term("\\x.")
        assert e.value.span is not None

    def test_nested_control(self):
        m = parse_term("\\x.mu a.[a](x (\\y.mu b.[a] y))")
        assert m == Abs("x", Mu("a", "a", App(Var("x"),
                                              Abs("y", Mu("b", "a", Var("y"))))))


class TestTypeParsing:
    def test_arrow_right_associative(self):
        assert parse_type("A -> B -> A") == Arrow(A, Arrow(B, A))

    def test_connective_precedence(self):
        assert parse_type("A /\\ B -> A") == Arrow(Inter((A, B)), A)
        assert parse_type("A \\/ (A -> B)") == Union((A, Arrow(A, B)))

    def test_constants(self):
        assert parse_type("top") == Top
        assert parse_type("bot") == Bottom
        assert parse_type("⊤") == Top
        assert parse_type("⊥") == Bottom

    def test_unicode_connectives(self):
        assert parse_type("A ∩ B") == Inter((A, B))
        assert parse_type("A ∪ B") == Union((A, B))
        assert parse_type("A → B") == Arrow(A, B)

    def test_mixing_needs_parens(self):
        with pytest.raises(ParseError):
            parse_type("A /\\ B \\/ A")
        assert parse_type("A /\\ (B \\/ A)") == Inter((A, Union((B, A))))

    def test_language_enforcement(self):
        with pytest.raises(LanguageViolation):
            parse_type("A /\\ B", language="curry")
        with pytest.raises(LanguageViolation):
            parse_type("A \\/ B", language="strict")
        with pytest.raises(LanguageViolation):
            parse_type("(A /\\ B) \\/ A")


class TestJudgments:
    def test_full_judgment(self):
        gamma, term, ty, delta = parse_judgment(
            "x:A, y:A -> B |- y x : B | 'a:A \\/ B")
        assert gamma == {"x": A, "y": Arrow(A, B)}
        assert term == App(Var("y"), Var("x"))
        assert ty == B
        assert delta == {"a": Union((A, B))}

    def test_empty_environments(self):
        gamma, term, ty, delta = parse_judgment("|- \\x.x : A -> A |")
        assert gamma == {} and delta == {}

    def test_judgment_round_trip(self):
        text = "x:A |- mu a.[a] x : A \\/ B |"
        gamma, term, ty, delta = parse_judgment(text)
        again = parse_judgment(print_judgment(gamma, term, ty, delta))
        assert again == (gamma, term, ty, delta)


class TestRoundTrips:
    def test_terms(self):
        rng = random.Random(3)
        for _ in range(300):
            m = random_term(rng)
            assert alpha_eq(parse_term(print_term(m)), m)

    def test_types(self):
        rng = random.Random(5)
        for _ in range(300):
            t = canonicalize(random_iu_type(rng))
            if not well_formed(t, "iu"):
                continue
            assert parse_type(print_type(t)) == t

    def test_fixed_texture(self):
        assert print_term(parse_term("(\\x.x)(y z)")) == "(\\x.x) (y z)"
        assert print_type(parse_type("(A -> B) -> A")) == "(A -> B) -> A"
        assert print_type(parse_type("A /\\ (B \\/ A)")) == "A /\\ (B \\/ A)"
