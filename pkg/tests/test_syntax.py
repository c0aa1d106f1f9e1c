import dataclasses

import pytest
from hypothesis import given, strategies as st

from g3kernel.syntax import (
    And, ArityError, Atom, Bot, Eq, Exists, Forall, Fun, Param, Sequent, SyntaxErrorAt, Var,
    formula_height, free_parameters, is_atomic, parse_formula, parse_sequent, parse_term,
    render_formula, render_sequent, substitute_formula, subterms, term_depth,
)

from helpers import formulas, terms

a, b = Param("a"), Param("b")
fa = Fun("f", (a,))


def _oracle_subst(obj, x, t):
    """Substitution by generic field traversal, independent of the library walker."""
    if isinstance(obj, Var):
        return t if obj.name == x else obj
    if isinstance(obj, (Forall, Exists)) and obj.var == x:
        return obj
    if isinstance(obj, tuple):
        return tuple(_oracle_subst(o, x, t) for o in obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        changes = {f.name: _oracle_subst(getattr(obj, f.name), x, t)
                   for f in dataclasses.fields(obj) if f.init and f.name != "var"}
        return dataclasses.replace(obj, **changes)
    return obj


def _oracle_params(obj):
    if isinstance(obj, Param):
        return {obj.name}
    if isinstance(obj, tuple):
        return set().union(*(_oracle_params(o) for o in obj)) if obj else set()
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return set().union(*(_oracle_params(getattr(obj, f.name))
                             for f in dataclasses.fields(obj) if f.init) or [set()])
    return set()


class TestParse:
    def test_identity_sequent(self):
        s = parse_sequent("P => P")
        assert s.ante == (Atom("P"),) and s.succ == (Atom("P"),)

    def test_height1_sequent(self):
        s = parse_sequent("a=f(a), a=f(a) => a=f(f(a))")
        assert s.ante == (Eq(a, fa), Eq(a, fa))
        assert s.succ == (Eq(a, Fun("f", (fa,))),)

    def test_empty(self):
        assert parse_sequent("=>") == Sequent()

    def test_multiset_equality(self):
        assert parse_sequent("P, Q => R") == parse_sequent("Q, P => R")
        assert parse_sequent("P, P =>") != parse_sequent("P =>")

    def test_connectives_and_precedence(self):
        f = parse_formula("P & Q | R -> _|_")
        assert render_formula(f) == "((P & Q) | R) -> _|_"
        g = parse_formula("forall x. exists y. R(x, y)")
        assert g == Forall("x", Exists("y", Atom("R", (Var("x"), Var("y")))))

    def test_implication_right_assoc(self):
        assert parse_formula("P -> Q -> R") == parse_formula("P -> (Q -> R)")

    def test_comments_ignored(self):
        assert parse_sequent("P => P  # trivial") == parse_sequent("P => P")

    def test_arity_clash(self):
        with pytest.raises(ArityError):
            parse_sequent("P(a), P(a, b) =>")
        with pytest.raises(ArityError):
            parse_sequent("f(a) = f(a, b) =>")

    def test_shared_arity_table(self):
        ar = {}
        parse_sequent("P(a) =>", ar)
        with pytest.raises(ArityError):
            parse_sequent("P(a, b) =>", ar)

    @pytest.mark.parametrize("text", ["P &", "=> =>", "forall . P", "P(a", "a =", "P $ Q"])
    def test_syntax_errors(self, text):
        with pytest.raises(SyntaxErrorAt):
            parse_sequent(text)

    def test_error_position(self):
        with pytest.raises(SyntaxErrorAt) as e:
            parse_sequent("P, Q &\n => $")
        assert "2:" in str(e.value)


class TestSubstitution:
    def test_single_occurrence(self):
        assert substitute_formula(Atom("P", (Var("x"),)), "x", a) == Atom("P", (a,))

    def test_shadowed(self):
        f = Forall("x", Atom("P", (Var("x"),)))
        assert substitute_formula(f, "x", a) == f

    def test_eq(self):
        f = Eq(Var("x"), Fun("f", (Var("x"),)))
        assert substitute_formula(f, "x", a) == Eq(a, fa)
        assert substitute_formula(f, "x", a) == _oracle_subst(f, "x", a)

    @given(formulas(bound=("x",)), terms())
    def test_matches_oracle(self, f, t):
        assert substitute_formula(f, "x", t) == _oracle_subst(f, "x", t)

    @given(formulas(), terms())
    def test_closed_formula_unchanged(self, f, t):
        assert substitute_formula(f, "x", t) == f


class TestParameters:
    def test_examples(self):
        assert free_parameters(parse_formula("P(a, b)")) == {"a", "b"}
        assert free_parameters(parse_formula("forall x. P(x)")) == set()
        assert free_parameters(parse_sequent("a=f(a) => a=f(f(a))")) == {"a"}

    @given(formulas())
    def test_matches_oracle(self, f):
        assert free_parameters(f) == _oracle_params(f)


class TestRender:
    def test_examples(self):
        assert render_sequent(Sequent.of([Atom("P")], [Atom("P")])) == "P => P"
        assert render_sequent(Sequent()) == "=>"
        assert render_sequent(parse_sequent("=> P")) == "=> P"
        assert render_formula(Bot) == "_|_"

    @given(formulas())
    def test_formula_round_trip(self, f):
        assert parse_formula(render_formula(f)) == f

    @given(st.lists(formulas(depth=2), max_size=3), st.lists(formulas(depth=2), max_size=3))
    def test_sequent_round_trip(self, left, right):
        s = Sequent.of(left, right)
        assert parse_sequent(render_sequent(s)) == s

    @given(terms(depth=3))
    def test_term_round_trip(self, t):
        assert parse_term(render_formula(Eq(t, t)).split("=")[0]) == t


class TestMeasures:
    def test_atomic(self):
        assert is_atomic(Atom("P")) and is_atomic(Eq(a, b))
        assert not is_atomic(And(Atom("P"), Atom("Q")))

    def test_heights(self):
        assert formula_height(Atom("P")) == 0
        assert formula_height(parse_formula("forall x. P(x) & Q")) == 2
        assert term_depth(Fun("f", (fa,))) == 2

    def test_subterms(self):
        assert subterms(parse_formula("a = f(f(a))")) == {a, fa, Fun("f", (fa,))}
