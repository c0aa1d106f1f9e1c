import pytest
from hypothesis import assume, given, settings, strategies as st

from g3kernel.calculus import (
    EIGEN_RULES, STRUCTURAL, Calculus, Flavor, Hole, check_derivation, height,
    is_logic_free, is_separated, make_schema, node, rules_used,
)
from g3kernel.search import random_derivation
from g3kernel.syntax import (
    Atom, Eq, Param, Var, free_parameters, parse_formula as F, parse_sequent as S, parse_term,
)
from g3kernel.transform import (
    NormalizerError, NotInvertible, TransformError, atomic_core, decompose_repl,
    eliminate_structural, eq_contract, eq_cut, expand_structural, identity_derivation, invert,
    separate, separate_cutcs, separate_r_inference, substitute_derivation, weaken,
)

from helpers import FLAVORS, STRUCTURAL_ALL, eq_cal, formulas, height1_derivation, plain_cal

H1 = "a=f(a), a=f(a) => a=f(f(a))"


def init(seq, p):
    return node(S(seq), "Init", principal=F(p))


def rules(d):
    return [n.rule for n in d]


def _free_part(d):
    """Tallest logic-free subderivation; leaves always qualify."""
    return max((n for n in d if is_logic_free(n)), key=height, default=None)


def eigen_ok(d):
    return all(n.eigen not in free_parameters(n.conclusion)
               for n in d if n.rule in EIGEN_RULES)


# ------------------------------------------------------------ weakening

class TestWeaken:
    def test_init_left(self):
        w = weaken(init("P => P", "P"), "left", F("Q"), plain_cal())
        assert w.conclusion == S("Q, P => P") and height(w) == 0

    def test_height1_right(self):
        cal = eq_cal()
        w = weaken(height1_derivation(), "right", F("Q"), cal)
        assert check_derivation(w, cal) is None and height(w) == 1
        assert all(F("Q") in n.conclusion.succ for n in w)

    def test_eigenvariable_renamed(self):
        d = node(S("P(b) => forall x. P(x), P(b)"), "Rall", [init("P(b) => P(a), P(b)", "P(b)")],
                 principal=F("forall x. P(x)"), eigen="a")
        cal = plain_cal()
        w = weaken(d, "left", F("P(a)"), cal)
        assert check_derivation(w, cal) is None
        assert w.eigen != "a" and eigen_ok(w)

    @pytest.mark.parametrize("flavor", ["i", "m"])
    def test_intuitionistic_right_stops_at_rimp(self, flavor):
        cal = plain_cal(flavor)
        d = node(S("=> P -> P"), "Rimp", [init("P => P", "P")], principal=F("P -> P"))
        w = weaken(d, "right", F("Q"), cal)
        assert check_derivation(w, cal) is None
        assert w.premisses[0].conclusion == S("P => P")

    @pytest.mark.parametrize("flavor", FLAVORS)
    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10**6), side=st.sampled_from(["left", "right"]),
           f=formulas(depth=2))
    def test_height_preserving(self, flavor, seed, side, f):
        cal = eq_cal(flavor, "Cutcs")
        d = random_derivation(seed, cal, 20)
        w = weaken(d, side, f, cal)
        assert check_derivation(w, cal) is None
        assert height(w) == height(d) and eigen_ok(w)
        expected = d.conclusion.add(left=[f]) if side == "left" else d.conclusion.add(right=[f])
        assert w.conclusion == expected


class TestSubstitute:
    def test_init(self):
        d = substitute_derivation(init("P(a) => P(a)", "P(a)"), "a", parse_term("f(b)"))
        assert d == init("P(f(b)) => P(f(b))", "P(f(b))")

    def test_vacuous(self):
        d = height1_derivation()
        assert substitute_derivation(d, "zz", Param("b")) == d

    def test_eigen_clash(self):
        cal = plain_cal()
        d = node(S("P(b) => forall x. P(x), P(b)"), "Rall", [init("P(b) => P(a), P(b)", "P(b)")],
                 principal=F("forall x. P(x)"), eigen="a")
        out = substitute_derivation(d, "b", Param("a"), cal)
        assert out.conclusion == S("P(a) => forall x. P(x), P(a)")
        assert check_derivation(out, cal) is None and eigen_ok(out)

    @pytest.mark.parametrize("flavor", FLAVORS)
    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10**6), a=st.sampled_from("abc"), t=st.sampled_from(
        ["b", "f(a)", "g(a,c)", "f(f(b))"]))
    def test_height_and_validity(self, flavor, seed, a, t):
        cal = eq_cal(flavor, "Cutcs")
        d = random_derivation(seed, cal, 20)
        out = substitute_derivation(d, a, parse_term(t), cal)
        assert check_derivation(out, cal) is None
        assert height(out) == height(d) and eigen_ok(out)


# ---------------------------------------------------------- atomic core

class TestAtomicCore:
    def test_compound_context_dropped(self):
        c, d = atomic_core(init("P, A & B => P", "P"), plain_cal())
        assert c == S("P => P") and height(d) == 0

    def test_height1_weakened(self):
        cal = eq_cal()
        w = weaken(height1_derivation(), "left", F("A | B"), cal)
        c, d = atomic_core(w, cal)
        assert c == S(H1)
        assert rules(d) == rules(height1_derivation()) and check_derivation(d, cal) is None

    def test_axiom_schema_leaf(self):
        sym = make_schema("Sym", [], "?s = ?t => ?t = ?s")
        cal = Calculus(Flavor.C, (sym,))
        d = node(S("P & Q, a=b => b=a, R"), "Sym", bindings={"s": Param("a"), "t": Param("b")})
        assert check_derivation(d, cal) is None
        c, core = atomic_core(d, cal)
        assert c == S("a=b => b=a") and check_derivation(core, cal) is None

    @pytest.mark.parametrize("flavor", FLAVORS)
    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10**6), f=formulas(depth=2))
    def test_core_laws(self, flavor, seed, f):
        cal = eq_cal(flavor)
        base = _free_part(random_derivation(seed, cal, 20))
        assume(base is not None)
        d = weaken(base, "left", f, cal)
        c, core = atomic_core(d, cal)
        assert c.issubsequent(d.conclusion) and core.conclusion == c
        assert check_derivation(core, cal) is None and height(core) <= height(d)


# ---------------------------------------------------------- inversion

class TestInvert:
    def test_last_rule(self):
        cal = plain_cal()
        prem = init("P, Q => P", "P")
        d = node(S("P & Q => P"), "Land", [prem], principal=F("P & Q"))
        assert invert(d, "Land", F("P & Q"), cal) == [prem]

    def test_intuitionistic_limp(self):
        cal = plain_cal("i", "Cutcs")
        d = node(S("P -> Q, R -> S, R => S"), "Limp",
                 [init("P -> Q, R -> S, R => S, R", "R"), init("P -> Q, S, R => S", "S")],
                 principal=F("R -> S"))
        assert check_derivation(d, cal) is None
        first, second = invert(d, "Limp", F("P -> Q"), cal)
        assert first.conclusion == S("P -> Q, R -> S, R => S, P")
        assert second.conclusion == S("Q, R -> S, R => S")
        # recursive inversion then reapplication of the last rule
        assert second.rule == "Limp" and second.principal == F("R -> S")
        for p in (first, second):
            assert check_derivation(p, cal) is None and height(p) <= height(d)

    def test_logic_free_lor(self):
        cal = eq_cal("c", "Cutcs")
        d = weaken(height1_derivation(), "left", F("A | B"), cal)
        ps = invert(d, "Lor", F("A | B"), cal)
        assert [p.conclusion for p in ps] == [S("A, " + H1), S("B, " + H1)]
        for p in ps:
            assert check_derivation(p, cal) is None and height(p) <= height(d)

    @pytest.mark.parametrize("flavor", ["i", "m"])
    @pytest.mark.parametrize("rule,f", [("Rimp", "P -> P"), ("Rall", "forall x. P(x)")])
    def test_intuitionistic_exclusion(self, flavor, rule, f):
        cal = plain_cal(flavor)
        d = weaken(init("P(a) => P(a)", "P(a)"), "right", F(f), cal)
        d = weaken(d, "left", F("P"), cal)
        with pytest.raises(NotInvertible):
            invert(d, rule, F(f), cal)

    def test_missing_principal(self):
        with pytest.raises(TransformError):
            invert(init("P => P", "P"), "Land", F("P & Q"), plain_cal())


# ----------------------------------------------------------- separation

class TestSeparateR:
    def test_logic_free_premisses(self):
        cal = eq_cal()
        d0 = height1_derivation()
        out = separate_r_inference(list(d0.premisses), "Repl", d0.binding_map, cal)
        assert out == d0

    def test_lor_premiss(self):
        cal = eq_cal()
        d0 = height1_derivation()
        leaf = d0.premisses[0]
        pa = weaken(leaf, "left", F("A"), cal)
        pb = weaken(leaf, "left", F("B"), cal)
        prem = node(leaf.conclusion.add(left=[F("A | B")]), "Lor", [pa, pb], principal=F("A | B"))
        out = separate_r_inference([prem], "Repl", d0.binding_map, cal)
        assert out.rule == "Lor" and [p.rule for p in out.premisses] == ["Repl", "Repl"]
        assert out.conclusion == d0.conclusion.add(left=[F("A | B")])
        assert check_derivation(out, cal) is None and is_separated(out)

    def test_rand_premiss(self):
        cal = eq_cal()
        d0 = height1_derivation()
        leaf = d0.premisses[0]
        pa = weaken(leaf, "right", F("Q"), cal)
        pb = node(leaf.conclusion.add(left=[F("R")], right=[F("R")]), "Init", principal=F("R"))
        prem = node(leaf.conclusion.add(left=[F("R")], right=[F("Q & R")]), "Rand",
                    [weaken(pa, "left", F("R"), cal), pb], principal=F("Q & R"))
        assert check_derivation(prem, cal) is None
        out = separate_r_inference([prem], "Repl", d0.binding_map, cal)
        assert out.rule == "Rand"
        assert out.conclusion == d0.conclusion.add(left=[F("R")], right=[F("Q & R")])
        assert check_derivation(out, cal) is None and is_separated(out)


class TestSeparateCutcs:
    cal = eq_cal("c", "Cutcs")

    def test_weakened_rule_premiss(self):
        D = weaken(height1_derivation(), "right", F("P & Q"), self.cal)
        inner = weaken(weaken(height1_derivation(), "left", F("P"), self.cal), "left", F("Q"),
                       self.cal)
        E = node(S("P & Q, " + H1), "Land", [inner], principal=F("P & Q"))
        out = separate_cutcs(D, E, F("P & Q"), self.cal)
        assert out == height1_derivation()

    def test_case3_and(self):
        D = node(S("P, Q => P, P & Q"), "Rand", [init("P, Q => P, P", "P"),
                                                  init("P, Q => P, Q", "Q")],
                 principal=F("P & Q"))
        E = node(S("P & Q, P, Q => P"), "Land", [init("P, Q, P, Q => P", "P")],
                 principal=F("P & Q"))
        trace = []
        out = separate_cutcs(D, E, F("P & Q"), self.cal, trace=trace)
        # cut on C against the weakened cut on B
        assert (out.rule, out.principal) == ("Cutcs", F("Q"))
        inner = out.premisses[1]
        assert (inner.rule, inner.principal) == ("Cutcs", F("P"))
        assert inner.conclusion == S("P, Q, Q => P")
        assert check_derivation(out, self.cal) is None and is_separated(out)
        assert all(b is None or m < b for b, m in trace)

    def test_case3_forall(self):
        D = node(S("forall x. P(x) => P(b), forall x. P(x)"), "Rall",
                 [node(S("forall x. P(x) => P(b), P(e)"), "Lall",
                       [init("P(e), forall x. P(x) => P(b), P(e)", "P(e)")],
                       principal=F("forall x. P(x)"), term=Param("e"))],
                 principal=F("forall x. P(x)"), eigen="e")
        E = node(S("forall x. P(x), forall x. P(x) => P(b)"), "Lall",
                 [init("P(b), forall x. P(x), forall x. P(x) => P(b)", "P(b)")],
                 principal=F("forall x. P(x)"), term=Param("b"))
        out = separate_cutcs(D, E, F("forall x. P(x)"), self.cal)
        assert out.conclusion == S("forall x. P(x) => P(b)")
        assert check_derivation(out, self.cal) is None and is_separated(out)
        assert F("forall x. P(x)") not in {n.principal for n in out if n.rule == "Cutcs"}

    def test_context_mismatch(self):
        with pytest.raises(TransformError):
            separate_cutcs(init("P => P", "P"), init("P, Q => Q", "Q"), F("P"), self.cal)


class TestSeparate:
    def test_idempotent(self):
        cal = eq_cal("c", "Cutcs")
        d = height1_derivation()
        assert separate(d, cal) == d

    def test_cutcs_below_land(self):
        cal = plain_cal("c", "Cutcs")
        D = node(S("P & Q => P, P"), "Land", [init("P, Q => P, P", "P")], principal=F("P & Q"))
        E = node(S("P, P & Q => P"), "Land", [init("P, P, Q => P", "P")], principal=F("P & Q"))
        d = node(S("P & Q => P"), "Cutcs", [D, E], principal=F("P"))
        assert check_derivation(d, cal) is None and not is_separated(d)
        out = separate(d, cal)
        assert out.conclusion == d.conclusion
        assert check_derivation(out, cal) is None and is_separated(out)

    def test_repl_below_ror_below_cutcs(self):
        cal = eq_cal("c", "Cutcs")
        d0 = height1_derivation()
        leaf = weaken(d0.premisses[0], "right", F("Q"), cal)
        ror = node(leaf.conclusion.remove(right=[F("Q"), F("a=f(f(a))")]).add(
            right=[F("Q | a=f(f(a))")]), "Ror", [leaf], principal=F("Q | a=f(f(a))"))
        repl = node(d0.conclusion.remove(right=[F("a=f(f(a))")]).add(right=[F("Q | a=f(f(a))")]),
                    "Repl", [ror], bindings=d0.bindings)
        assert check_derivation(repl, cal) is None and not is_separated(repl)
        d = node(repl.conclusion, "Cutcs",
                 [weaken(repl, "right", F("P"), cal), weaken(repl, "left", F("P"), cal)],
                 principal=F("P"))
        assert check_derivation(d, cal) is None
        out = separate(d, cal)
        assert out.conclusion == d.conclusion
        assert check_derivation(out, cal) is None and is_separated(out)

    def test_rejects_other_structural(self):
        cal = plain_cal("c", "LW")
        d = node(S("Q, P => P"), "LW", [init("P => P", "P")], principal=F("Q"))
        with pytest.raises(TransformError):
            separate(d, cal)

    @pytest.mark.parametrize("flavor", FLAVORS)
    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_separation_laws(self, flavor, seed):
        cal = eq_cal(flavor, "Cutcs")
        d = random_derivation(seed, cal, 25)
        trace = []
        out = separate(d, cal, trace=trace)
        assert out.conclusion == d.conclusion
        assert check_derivation(out, cal) is None and is_separated(out)
        assert separate(out, cal) == out
        assert all(b is None or m < b for b, m in trace)


# ---------------------------------------------------- structural rules

class TestIdentity:
    def test_atomic(self):
        assert identity_derivation(F("P(a)")) == init("P(a) => P(a)", "P(a)")

    @pytest.mark.parametrize("flavor", FLAVORS)
    def test_and(self, flavor):
        d = identity_derivation(F("A & B"), flavor=flavor)
        assert d.rule == "Land" and d.premisses[0].rule == "Rand"
        assert check_derivation(d, plain_cal(flavor)) is None

    @pytest.mark.parametrize("flavor", FLAVORS)
    def test_forall(self, flavor):
        d = identity_derivation(F("forall x. P(x)"), flavor=flavor)
        assert d.rule == "Rall" and d.premisses[0].rule == "Lall"
        assert d.premisses[0].term == Param(d.eigen)
        assert check_derivation(d, plain_cal(flavor)) is None

    @pytest.mark.parametrize("flavor", FLAVORS)
    @settings(max_examples=40, deadline=None)
    @given(f=formulas(), left=st.lists(formulas(depth=1), max_size=2),
           right=st.lists(formulas(depth=1), max_size=2))
    def test_valid(self, flavor, f, left, right):
        d = identity_derivation(f, left, right, flavor)
        assert d.conclusion == S("=>").add(left=[f, *left], right=[f, *right])
        assert check_derivation(d, plain_cal(flavor)) is None
        assert not rules_used(d) & STRUCTURAL


class TestExpand:
    def test_lc(self):
        cal = eq_cal("c", "LC")
        d = node(S("a=f(a) => a=f(f(a))"), "LC", [height1_derivation()], principal=F("a=f(a)"))
        out = expand_structural(d, cal)
        assert out.rule == "Cutcs" and out.principal == F("a=f(a)")
        assert out.premisses[0] == init("a=f(a) => a=f(f(a)), a=f(a)", "a=f(a)")
        assert out.premisses[1] == height1_derivation()
        assert check_derivation(out, eq_cal("c", "Cutcs")) is None

    def test_cut(self):
        cal = plain_cal("c", "Cut")
        # contexts P; R and R; R, S
        d = node(S("P, R => R, R, S"), "Cut",
                 [init("P => R, P", "P"), init("P, R => R, S", "R")], principal=F("P"))
        assert check_derivation(d, cal) is None
        out = expand_structural(d, cal)
        assert out.rule == "Cutcs"
        assert [p.conclusion for p in out.premisses] == [S("P, R => R, R, S, P"),
                                                         S("P, P, R => R, R, S")]
        assert check_derivation(out, plain_cal("c", "Cutcs")) is None

    def test_lw(self):
        cal = plain_cal("c", "LW")
        d = node(S("Q, P => P"), "LW", [init("P => P", "P")], principal=F("Q"))
        assert expand_structural(d, cal) == init("Q, P => P", "P")


class TestEliminate:
    def test_excluded_middle_with_cut(self):
        cal = plain_cal("c", "Cut", "RC")
        em = F("P | (P -> _|_)")
        # => em, P  and  P => em  cut on P
        left = node(S("=> P | (P -> _|_), P"), "Ror",
                    [node(S("=> P, P -> _|_, P"), "Rimp", [init("P => P, _|_, P", "P")],
                          principal=F("P -> _|_"))], principal=em)
        right = node(S("P => P | (P -> _|_)"), "Ror",
                     [init("P => P, P -> _|_", "P")], principal=em)
        cut = node(S("=> P | (P -> _|_), P | (P -> _|_)"), "Cut", [left, right], principal=F("P"))
        d = node(S("=> P | (P -> _|_)"), "RC", [cut], principal=em)
        assert check_derivation(d, cal) is None
        out = eliminate_structural(d, cal)
        assert out.conclusion == d.conclusion
        assert check_derivation(out, plain_cal("c")) is None

    def test_contraction_on_height1(self):
        cal = eq_cal("c", "LC")
        d = node(S("a=f(a) => a=f(f(a))"), "LC", [height1_derivation()], principal=F("a=f(a)"))
        out = eliminate_structural(d, cal)
        assert out.conclusion == S("a=f(a) => a=f(f(a))")
        assert check_derivation(out, eq_cal("c")) is None
        assert set(rules(out)) <= {"Init", "Ref", "Repl"}

    def test_idempotent(self):
        cal = eq_cal("c")
        assert eliminate_structural(height1_derivation(), cal) == height1_derivation()

    def test_custom_extension_failure_is_reported(self):
        sym = make_schema("Sym", ["?t = ?s, ?s = ?t =>"], "?s = ?t =>")
        cal = Calculus(Flavor.C, (sym,), frozenset({"LC"}))
        d1 = node(S("a=b, a=b => b=a"), "Sym", [init("b=a, a=b, a=b => b=a", "b=a")],
                  bindings={"s": Param("a"), "t": Param("b")})
        d = node(S("a=b => b=a"), "LC", [d1], principal=F("a=b"))
        assert check_derivation(d, cal) is None
        try:
            out = eliminate_structural(d, cal)
        except NormalizerError:
            return
        assert check_derivation(out, cal.with_admitted()) is None

    @pytest.mark.parametrize("flavor", FLAVORS)
    @pytest.mark.parametrize("ext", ["eq", "none"])
    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_rule_absence(self, flavor, ext, seed):
        cal = (eq_cal if ext == "eq" else plain_cal)(flavor, *STRUCTURAL_ALL)
        d = random_derivation(seed, cal, 25)
        out = eliminate_structural(d, cal)
        assert out.conclusion == d.conclusion
        assert not rules_used(out) & STRUCTURAL
        assert check_derivation(out, cal.with_admitted()) is None


# ------------------------------------------------------ equality rules

class TestEqContract:
    cal = eq_cal()

    def test_init(self):
        d = init("a=b, a=b => a=b", "a=b")
        assert eq_contract(d, F("a=b"), self.cal) == init("a=b => a=b", "a=b")

    def test_s_eq_r_case_shape(self):
        # both copies of a=f(a) are actives and the hole body is a=f(x)
        out = eq_contract(height1_derivation(), F("a=f(a)"), self.cal)
        assert [n.rule for n in out] == ["Ref", "Repl", "Repl", "Init"]
        ref, mid, orig = out, out.premisses[0], out.premisses[0].premisses[0]
        assert ref.conclusion == S("a=f(a) => a=f(f(a))") and ref.binding_map == {"t": Param("a")}
        assert mid.conclusion == S("a=a, a=f(a) => a=f(f(a))")
        assert mid.binding_map["P"] == Hole("x", Eq(Param("a"), Var("x")))
        assert orig == weaken(height1_derivation(), "left", F("a=a"), self.cal)
        assert check_derivation(out, self.cal) is None and height(out) == 3

    def test_x_eq_r_case(self):
        a, b = Param("a"), Param("b")
        leaf = init("a=b, a=b, b=b => b=b", "b=b")
        d = node(S("a=b, a=b => b=b"), "Repl", [leaf],
                 bindings={"s": a, "r": b, "P": Hole("x", Eq(Var("x"), b))})
        assert check_derivation(d, self.cal) is None
        out = eq_contract(d, F("a=b"), self.cal)
        assert out.rule == "Ref" and out.binding_map == {"t": b}
        assert out.conclusion == S("a=b => b=b")
        assert check_derivation(out, self.cal) is None

    def test_context_only(self):
        cal = self.cal
        w = weaken(weaken(height1_derivation(), "left", F("b=b"), cal), "left", F("b=b"), cal)
        out = eq_contract(w, F("b=b"), cal)
        assert out.rule == "Repl" and out.conclusion == S("b=b, " + H1)
        assert check_derivation(out, cal) is None

    def test_rejects_logic(self):
        d = node(S("P & Q, a=b, a=b => P"), "Land", [init("P, Q, a=b, a=b => P", "P")],
                 principal=F("P & Q"))
        with pytest.raises(TransformError):
            eq_contract(d, F("a=b"), self.cal)

    def test_decompose_multi_occurrence(self):
        a, b = Param("a"), Param("b")
        cal = eq_cal()
        leaf = node(S("a=b, R(a,a), R(b,b) => R(b,b)"), "Init", principal=F("R(b,b)"))
        d = node(S("a=b, R(a,a) => R(b,b)"), "Repl", [leaf],
                 bindings={"s": a, "r": b, "P": Hole("x", Atom("R", (Var("x"), Var("x"))))})
        assert check_derivation(d, cal) is None
        out = decompose_repl(d)
        assert [n.rule for n in out] == ["Repl", "Repl", "Init"]
        assert check_derivation(out, cal) is None


class TestEqCut:
    cal = eq_cal()

    def test_init_left(self):
        # the cut formula is the principal of the axiom
        d1 = init("b=a => b=a, b=a", "b=a")
        d2 = init("b=a, b=a => b=a", "b=a")
        out = eq_cut(d1, d2, F("b=a"), self.cal)
        assert out == init("b=a => b=a", "b=a")

    def test_absent_from_core(self):
        d1 = weaken(height1_derivation(), "right", F("b=c"), self.cal)
        d2 = weaken(height1_derivation(), "left", F("b=c"), self.cal)
        out = eq_cut(d1, d2, F("b=c"), self.cal)
        assert out == height1_derivation()

    def test_repl_recursion(self):
        d1 = weaken(height1_derivation(), "right", F("a=f(a)"), self.cal)
        d2 = weaken(height1_derivation(), "left", F("a=f(a)"), self.cal)
        out = eq_cut(d1, d2, F("a=f(a)"), self.cal)
        assert out.conclusion == S(H1) and out.rule == "Repl"
        assert check_derivation(out, self.cal) is None

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 10**6), side=st.sampled_from(["left", "right"]))
    def test_random_contractions(self, seed, side):
        cal = eq_cal("c")
        d = _free_part(random_derivation(seed, cal, 20))
        assume(d is not None)
        fs = d.conclusion.ante if side == "left" else d.conclusion.succ
        assume(fs)
        A = fs[0]
        w = weaken(d, side, A, cal)
        out = eq_contract(w, A, cal, side)
        assert out.conclusion == d.conclusion
        assert check_derivation(out, cal) is None
        assert set(rules(out)) <= {"Init", "Ref", "Repl"}
