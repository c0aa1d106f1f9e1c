"""G3m/G3i/G3c, atomic rule schemas, derivation trees and the checker.

The checker is the oracle for every transformation in the package: each
node is validated by recomputing what its rule demands from the stored
instantiation data and comparing multisets.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterator, Union

from .syntax import (
    And, Atom, Bot, BotType, Eq, Exists, Forall, Formula, Fun, HoleAtom, Imp,
    Meta, Or, Param, Sequent, Term, Var, free_parameters, free_vars, is_atomic,
    parse_pattern_sequent, render_formula, render_term, substitute_formula,
    term_vars,
)


class Flavor(str, Enum):
    M = "m"
    I = "i"
    C = "c"

    @property
    def intuitionistic(self) -> bool:
        return self is not Flavor.C


LOGICAL = frozenset({"Land", "Rand", "Lor", "Ror", "Limp", "Rimp",
                     "Lall", "Rall", "Lex", "Rex", "LBot"})
STRUCTURAL = frozenset({"Cut", "Cutcs", "LW", "RW", "LC", "RC"})
INITIAL = frozenset({"Init", "InitBot"})
LEFT_RULES = frozenset({"Land", "Lor", "Limp", "Lall", "Lex"})
RIGHT_RULES = frozenset({"Rand", "Ror", "Rimp", "Rall", "Rex"})
EIGEN_RULES = frozenset({"Rall", "Lex"})
TERM_RULES = frozenset({"Lall", "Rex"})

# Connective introduced by each logical rule.
CONNECTIVE = {
    "Land": And, "Rand": And, "Lor": Or, "Ror": Or, "Limp": Imp, "Rimp": Imp,
    "Lall": Forall, "Rall": Forall, "Lex": Exists, "Rex": Exists,
}

ADMITTED_NAMES = {"cut": "Cut", "cutcs": "Cutcs", "lw": "LW", "rw": "RW",
                  "lc": "LC", "rc": "RC"}


def rule_for(connective: type, left: bool) -> str:
    for name, conn in CONNECTIVE.items():
        if conn is connective and (name in LEFT_RULES) == left:
            return name
    raise KeyError(connective)


def is_core_atomic(f: Formula, flavor: Flavor) -> bool:
    """Atomic for initial sequents: atoms, equations, and ``_|_`` in G3m."""
    return is_atomic(f) or (f is Bot and flavor is Flavor.M)


def invertible(rule: str, flavor: Flavor) -> bool:
    if rule not in LOGICAL or rule == "LBot":
        return False
    return not (flavor.intuitionistic and rule in ("Rimp", "Rall"))


# -------------------------------------------------------------- schemas

@dataclass(frozen=True)
class Hole:
    """Binding of an atom metavariable: an atom with one bound hole variable."""

    var: str
    body: Formula

    def fill(self, t: Term) -> Formula:
        return substitute_formula(self.body, self.var, t)


Binding = Union[Term, Hole]


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class AtomicRuleSchema:
    """A rule whose active formulas are atomic patterns.

    ``premisses[k]`` holds the actives of premiss k; each premiss carries
    its own inert context, and the conclusion adds ``conclusion``'s actives
    to the union of those contexts.  A premiss-free schema is an axiom
    ``P, G => D, P'`` with one free context.
    """

    name: str
    premisses: tuple[Sequent, ...]
    conclusion: Sequent

    def __post_init__(self):
        for s in (*self.premisses, self.conclusion):
            for f in s.formulas():
                if not isinstance(f, (Atom, Eq, HoleAtom)):
                    raise SchemaError(f"{self.name}: active {render_formula(f)} is not atomic")

    @property
    def context_arity(self) -> int:
        return max(1, len(self.premisses))

    def metavariables(self) -> tuple[set[str], set[str]]:
        """(term metavariables, atom metavariables)."""
        terms: set[str] = set()
        holes: set[str] = set()

        def walk_t(t):
            if isinstance(t, Meta):
                terms.add(t.name)
            elif isinstance(t, Fun):
                for a in t.args:
                    walk_t(a)

        for s in (*self.premisses, self.conclusion):
            for f in s.formulas():
                if isinstance(f, HoleAtom):
                    holes.add(f.name)
                    walk_t(f.arg)
                elif isinstance(f, Atom):
                    for a in f.args:
                        walk_t(a)
                else:
                    walk_t(f.lhs)
                    walk_t(f.rhs)
        return terms, holes

    def instantiate(self, bindings: dict[str, Binding]) -> tuple[list[Sequent], Sequent]:
        """Active formulas of each premiss and of the conclusion."""
        terms, holes = self.metavariables()
        for n in terms:
            b = bindings.get(n)
            if b is None or isinstance(b, Hole):
                raise SchemaError(f"{self.name}: term metavariable ?{n} unbound")
            if term_vars(b):
                raise SchemaError(f"{self.name}: ?{n} bound to open term")
        for n in holes:
            if not isinstance(bindings.get(n), Hole):
                raise SchemaError(f"{self.name}: atom metavariable ?{n} unbound")
        extra = set(bindings) - terms - holes
        if extra:
            raise SchemaError(f"{self.name}: unknown metavariables {sorted(extra)}")
        inst = lambda s: Sequent.of([instantiate_pattern(f, bindings) for f in s.ante],
                                    [instantiate_pattern(f, bindings) for f in s.succ])
        return [inst(p) for p in self.premisses], inst(self.conclusion)


def _inst_term(t: Term, b: dict) -> Term:
    if isinstance(t, Meta):
        return b[t.name]
    if isinstance(t, Fun):
        return Fun(t.symbol, tuple(_inst_term(a, b) for a in t.args))
    return t


def instantiate_pattern(f: Formula, b: dict) -> Formula:
    match f:
        case HoleAtom(n, arg):
            return b[n].fill(_inst_term(arg, b))
        case Atom(p, args):
            return Atom(p, tuple(_inst_term(a, b) for a in args))
        case Eq(l, r):
            return Eq(_inst_term(l, b), _inst_term(r, b))
    raise SchemaError(f"not an atomic pattern: {f}")


def make_schema(name: str, premisses: list[str], conclusion: str) -> AtomicRuleSchema:
    return AtomicRuleSchema(name, tuple(parse_pattern_sequent(p) for p in premisses),
                            parse_pattern_sequent(conclusion))


REF = make_schema("Ref", ["?t = ?t =>"], "=>")
REPL = make_schema("Repl", ["?s = ?r, ?P[?s], ?P[?r] =>"], "?s = ?r, ?P[?s] =>")


def builtin_equality_extension() -> tuple[AtomicRuleSchema, ...]:
    """The reflexivity and replacement rules for equality."""
    return (REF, REPL)


# ------------------------------------------------------------ calculus

@dataclass(frozen=True)
class Calculus:
    flavor: Flavor
    extension: tuple[AtomicRuleSchema, ...] = ()
    admitted: frozenset[str] = frozenset()

    def __post_init__(self):
        names = [s.name for s in self.extension]
        if len(set(names)) != len(names):
            raise SchemaError(f"duplicate schema names in {names}")
        clash = set(names) & (LOGICAL | STRUCTURAL | INITIAL)
        if clash:
            raise SchemaError(f"schema names clash with builtin rules: {sorted(clash)}")
        bad = set(self.admitted) - STRUCTURAL
        if bad:
            raise ValueError(f"cannot admit {sorted(bad)}")

    def schema(self, name: str) -> AtomicRuleSchema | None:
        for s in self.extension:
            if s.name == name:
                return s
        return None

    def with_admitted(self, *rules: str) -> "Calculus":
        return replace(self, admitted=frozenset(rules))

    @property
    def schema_names(self) -> frozenset[str]:
        return frozenset(s.name for s in self.extension)

    def available(self, rule: str) -> bool:
        if rule == "Init" or rule in LOGICAL - {"LBot"}:
            return True
        if rule == "LBot":
            return self.flavor is not Flavor.M
        if rule == "InitBot":
            return self.flavor is Flavor.M
        if rule in STRUCTURAL:
            return rule in self.admitted
        return rule in self.schema_names

    def logic_free(self) -> "Calculus":
        return replace(self, admitted=frozenset(self.admitted & {"Cutcs"}))


def equality_calculus(flavor: Flavor | str, *admitted: str) -> Calculus:
    return Calculus(Flavor(flavor), builtin_equality_extension(), frozenset(admitted))


# ---------------------------------------------------------- derivations

@dataclass(frozen=True)
class Derivation:
    """A rule instance together with derivations of its premisses.

    ``principal`` is the principal formula of logical and structural rules,
    the atom of ``Init`` and the cut formula of ``Cut``/``Cutcs``.
    """

    conclusion: Sequent
    rule: str
    premisses: tuple["Derivation", ...] = ()
    principal: Formula | None = None
    term: Term | None = None
    eigen: str | None = None
    bindings: tuple[tuple[str, Binding], ...] = ()

    @property
    def binding_map(self) -> dict[str, Binding]:
        return dict(self.bindings)

    def __iter__(self) -> Iterator["Derivation"]:
        yield self
        for p in self.premisses:
            yield from p


def node(conclusion: Sequent, rule: str, premisses=(), *, principal=None, term=None,
         eigen=None, bindings=None) -> Derivation:
    b = tuple(sorted(bindings.items())) if isinstance(bindings, dict) else tuple(bindings or ())
    return Derivation(conclusion, rule, tuple(premisses), principal, term, eigen, b)


def height(d: Derivation) -> int:
    if not d.premisses:
        return 0
    return 1 + max(height(p) for p in d.premisses)


def size(d: Derivation) -> int:
    return 1 + sum(size(p) for p in d.premisses)


def walk(d: Derivation, path: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], Derivation]]:
    """Pre-order traversal yielding (path, node)."""
    yield path, d
    for i, p in enumerate(d.premisses):
        yield from walk(p, path + (i,))


def at_path(d: Derivation, path) -> Derivation:
    for i in path:
        d = d.premisses[i]
    return d


def replace_at(d: Derivation, path, new: Derivation) -> Derivation:
    if not path:
        return new
    i, rest = path[0], path[1:]
    ps = list(d.premisses)
    ps[i] = replace_at(ps[i], rest, new)
    return replace(d, premisses=tuple(ps))


def rules_used(d: Derivation) -> set[str]:
    return {n.rule for n in d}


def is_logic_free(d: Derivation) -> bool:
    return not any(n.rule in LOGICAL for n in d)


def is_separated(d: Derivation) -> bool:
    """No logical inference occurs above an extension-rule or Cut_cs inference."""
    return _separation(d)[0]


def _separation(d: Derivation) -> tuple[bool, bool]:
    ok = True
    has_logic = d.rule in LOGICAL
    kids_logic = False
    for p in d.premisses:
        s, l = _separation(p)
        ok = ok and s
        kids_logic = kids_logic or l
    if d.rule not in LOGICAL | STRUCTURAL | INITIAL or d.rule == "Cutcs":
        ok = ok and not kids_logic
    return ok, has_logic or kids_logic


# --------------------------------------------------------------- checker

class RuleError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    path: tuple[int, ...]
    rule: str
    reason: str

    def __str__(self) -> str:
        where = ".".join(map(str, self.path)) or "root"
        return f"at {where} ({self.rule}): {self.reason}"


def logical_premisses(rule: str, flavor: Flavor, concl: Sequent, principal: Formula,
                      term: Term | None = None, eigen: str | None = None) -> list[Sequent]:
    """Premisses demanded by a logical rule for a given conclusion.

    Raises RuleError when the conclusion/instantiation does not fit the rule.
    """
    conn = CONNECTIVE.get(rule)
    if conn is None:
        raise RuleError(f"{rule} is not a logical rule with premisses")
    if not isinstance(principal, conn):
        raise RuleError(f"principal {_fmt(principal)} is not introduced by {rule}")
    left = rule in LEFT_RULES
    if not concl.contains(*(([principal], []) if left else ([], [principal]))):
        side = "antecedent" if left else "succedent"
        raise RuleError(f"principal {_fmt(principal)} missing from {side}")
    if rule in TERM_RULES:
        if term is None or term_vars(term):
            raise RuleError(f"{rule} needs a closed instantiation term")
    if rule in EIGEN_RULES:
        if eigen is None:
            raise RuleError(f"{rule} needs an eigenvariable")
        if eigen in free_parameters(concl):
            raise RuleError(f"eigenvariable {eigen} occurs in the conclusion")
    intu = flavor.intuitionistic
    if left:
        rest = concl.remove(left=[principal])
    else:
        rest = concl.remove(right=[principal])
    match rule:
        case "Land":
            return [rest.add(left=[principal.left, principal.right])]
        case "Rand":
            return [rest.add(right=[principal.left]), rest.add(right=[principal.right])]
        case "Lor":
            return [rest.add(left=[principal.left]), rest.add(left=[principal.right])]
        case "Ror":
            return [rest.add(right=[principal.left, principal.right])]
        case "Limp":
            if intu:
                return [concl.add(right=[principal.left]), rest.add(left=[principal.right])]
            return [rest.add(right=[principal.left]), rest.add(left=[principal.right])]
        case "Rimp":
            if intu:
                return [Sequent.of((*concl.ante, principal.left), [principal.right])]
            return [rest.add(left=[principal.left], right=[principal.right])]
        case "Lall":
            return [concl.add(left=[substitute_formula(principal.body, principal.var, term)])]
        case "Rex":
            return [concl.add(right=[substitute_formula(principal.body, principal.var, term)])]
        case "Rall":
            inst = substitute_formula(principal.body, principal.var, Param(eigen))
            if intu:
                return [Sequent.of(concl.ante, [inst])]
            return [rest.add(right=[inst])]
        case "Lex":
            inst = substitute_formula(principal.body, principal.var, Param(eigen))
            return [rest.add(left=[inst])]
    raise RuleError(rule)


def _fmt(f) -> str:
    return "none" if f is None else render_formula(f)


def check_node(d: Derivation, cal: Calculus) -> str | None:
    """Reason why ``d``'s last inference is incorrect, or None."""
    try:
        _check_node(d, cal)
    except (RuleError, SchemaError, KeyError, ValueError) as e:
        return str(e) or type(e).__name__
    return None


def _check_node(d: Derivation, cal: Calculus) -> None:
    rule, c, ps = d.rule, d.conclusion, d.premisses
    if not cal.available(rule):
        raise RuleError(f"rule {rule} is not available in this calculus")
    for f in c.formulas():
        if free_vars(f):
            raise RuleError(f"formula {render_formula(f)} has free bound variables")
    prem = [p.conclusion for p in ps]
    if d.term is not None and rule not in TERM_RULES:
        raise RuleError(f"{rule} takes no instantiation term")
    if d.eigen is not None and rule not in EIGEN_RULES:
        raise RuleError(f"{rule} takes no eigenvariable")
    if d.bindings and rule not in cal.schema_names:
        raise RuleError(f"{rule} takes no schema bindings")
    if rule in ("LBot", "InitBot") and d.principal not in (None, Bot):
        raise RuleError(f"{rule} has principal _|_, not {_fmt(d.principal)}")
    if rule in LOGICAL and rule != "LBot" or rule in ("LW", "RW", "LC", "RC", "Cutcs"):
        if d.principal is None:
            raise RuleError("missing principal formula")
    if rule == "Init":
        _arity(ps, 0)
        P = d.principal
        if P is None or not is_atomic(P):
            raise RuleError(f"Init needs an atomic principal, got {_fmt(P)}")
        if not c.contains([P], [P]):
            raise RuleError(f"{_fmt(P)} must occur on both sides")
        return
    if rule == "InitBot":
        _arity(ps, 0)
        if not c.contains([Bot], [Bot]):
            raise RuleError("_|_ must occur on both sides")
        return
    if rule == "LBot":
        _arity(ps, 0)
        if not c.contains([Bot], []):
            raise RuleError("_|_ must occur in the antecedent")
        return
    if rule in CONNECTIVE:
        expected = logical_premisses(rule, cal.flavor, c, d.principal, d.term, d.eigen)
        _arity(ps, len(expected))
        _same(prem, expected)
        return
    A = d.principal
    if rule in ("LW", "RW", "LC", "RC"):
        _arity(ps, 1)
        left = rule[0] == "L"
        if not c.contains(*(([A], []) if left else ([], [A]))):
            raise RuleError(f"{_fmt(A)} missing from the conclusion")
        if rule == "LW":
            exp = c.remove(left=[A])
        elif rule == "RW":
            exp = c.remove(right=[A])
        elif rule == "LC":
            exp = c.add(left=[A])
        else:
            exp = c.add(right=[A])
        _same(prem, [exp])
        return
    if rule == "Cutcs":
        _arity(ps, 2)
        _same(prem, [c.add(right=[A]), c.add(left=[A])])
        return
    if rule == "Cut":
        _arity(ps, 2)
        if A is None:
            raise RuleError("missing cut formula")
        p1, p2 = prem
        if not p1.contains([], [A]) or not p2.contains([A], []):
            raise RuleError(f"cut formula {_fmt(A)} not in premisses")
        p1r = p1.remove(right=[A])
        p2r = p2.remove(left=[A])
        exp = Sequent.of((*p1r.ante, *p2r.ante), (*p1r.succ, *p2r.succ))
        if exp != c:
            raise RuleError(f"conclusion should be {exp}")
        return
    schema = cal.schema(rule)
    if schema is None:
        raise RuleError(f"unknown rule {rule}")
    exp = schema_conclusion(schema, d.binding_map, prem, c)
    if exp != c:
        raise RuleError(f"conclusion should be {exp}")


def schema_conclusion(schema: AtomicRuleSchema, bindings: dict, prem: list[Sequent],
                      concl: Sequent | None = None) -> Sequent:
    """Conclusion produced by applying ``schema`` to premisses ``prem``.

    For an axiom schema the given conclusion is accepted if it contains the
    actives (its context is free).
    """
    actives, out = schema.instantiate(bindings)
    _arity(prem, len(actives))
    if not actives:
        if concl is None or not concl.contains(out.ante, out.succ):
            raise RuleError(f"{schema.name}: conclusion lacks actives {out}")
        return concl
    ante, succ = list(out.ante), list(out.succ)
    for k, (p, q) in enumerate(zip(prem, actives)):
        if not p.contains(q.ante, q.succ):
            raise RuleError(f"{schema.name}: premiss {k} lacks actives {q}")
        ctx = p.remove(q.ante, q.succ)
        ante += ctx.ante
        succ += ctx.succ
    return Sequent.of(ante, succ)


def _arity(ps, n: int):
    if len(ps) != n:
        raise RuleError(f"expected {n} premisses, found {len(ps)}")


def _same(actual: list[Sequent], expected: list[Sequent]):
    for k, (a, e) in enumerate(zip(actual, expected)):
        if a != e:
            raise RuleError(f"premiss {k} is {a} but the rule demands {e}")


def check_derivation(d: Derivation, cal: Calculus) -> Violation | None:
    """First incorrect node in pre-order, or None if ``d`` is a derivation in ``cal``."""
    stack = [((), d)]
    while stack:
        path, n = stack.pop()
        reason = check_node(n, cal)
        if reason is not None:
            return Violation(path, n.rule, reason)
        for i in reversed(range(len(n.premisses))):
            stack.append((path + (i,), n.premisses[i]))
    return None


def is_valid(d: Derivation, cal: Calculus) -> bool:
    return check_derivation(d, cal) is None
