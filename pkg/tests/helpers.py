"""Shared fixtures: hypothesis strategies for syntax, hand-built derivations, calculi."""

from hypothesis import strategies as st

from g3kernel.calculus import Calculus, Flavor, Hole, equality_calculus, node
from g3kernel.syntax import (
    And, Atom, Bot, Eq, Exists, Forall, Fun, Imp, Or, Param, Var, parse_formula, parse_sequent,
)

FLAVORS = [Flavor.M, Flavor.I, Flavor.C]
STRUCTURAL_ALL = ("Cut", "Cutcs", "LW", "RW", "LC", "RC")

# fixed signature so arities stay consistent
PARAMS = ["a", "b", "c"]
FUNS = {"f": 1, "g": 2}
PREDS = {"P": 1, "Q": 0, "R": 2}


def terms(bound=(), depth=2):
    leaves = [st.sampled_from(PARAMS).map(Param)]
    if bound:
        leaves.append(st.sampled_from(list(bound)).map(Var))
    leaf = st.one_of(leaves)
    if depth == 0:
        return leaf
    sub = terms(bound, depth - 1)
    return st.one_of(
        leaf,
        sub.map(lambda t: Fun("f", (t,))),
        st.tuples(sub, sub).map(lambda p: Fun("g", p)),
    )


def atoms(bound=()):
    t = terms(bound, 2)
    return st.one_of(
        st.just(Atom("Q")),
        t.map(lambda x: Atom("P", (x,))),
        st.tuples(t, t).map(lambda p: Atom("R", p)),
        st.tuples(t, t).map(lambda p: Eq(*p)),
    )


@st.composite
def formulas(draw, bound=(), depth=3):
    if depth == 0 or draw(st.integers(0, 3)) == 0:
        return draw(st.one_of(atoms(bound), st.just(Bot)))
    k = draw(st.sampled_from(["and", "or", "imp", "all", "ex"]))
    if k in ("all", "ex"):
        x = draw(st.sampled_from(["x", "y", "z"]))
        body = draw(formulas(tuple(set(bound) | {x}), depth - 1))
        return (Forall if k == "all" else Exists)(x, body)
    l = draw(formulas(bound, depth - 1))
    r = draw(formulas(bound, depth - 1))
    return {"and": And, "or": Or, "imp": Imp}[k](l, r)


def height1_derivation():
    """Repl over Init for a=f(a), a=f(a) => a=f(f(a))."""
    leaf = node(parse_sequent("a=f(a), a=f(a), a=f(f(a)) => a=f(f(a))"), "Init",
                principal=parse_formula("a=f(f(a))"))
    return node(parse_sequent("a=f(a), a=f(a) => a=f(f(a))"), "Repl", [leaf],
                bindings={"s": Param("a"), "r": Fun("f", (Param("a"),)),
                          "P": Hole("x", Eq(Param("a"), Fun("f", (Var("x"),))))})


def eq_cal(flavor="c", *admitted) -> Calculus:
    return equality_calculus(flavor, *admitted)


def plain_cal(flavor="c", *admitted) -> Calculus:
    return Calculus(Flavor(flavor), (), frozenset(admitted))
