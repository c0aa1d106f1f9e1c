"""Contraction and cut for logic-free derivations using only Ref and Repl."""

from __future__ import annotations

from ..calculus import Calculus, Derivation, Flavor, Hole, node
from ..syntax import Bot, Eq, Formula, Fun, Sequent, Term, Var, count
from .base import TransformError, weaken_by


def _flavor(cal) -> Flavor:
    return cal.flavor if isinstance(cal, Calculus) else Flavor(cal)


def _check_rules(d: Derivation):
    for n in d:
        if n.rule not in ("Init", "InitBot", "Ref", "Repl"):
            raise TransformError(f"expected a Ref/Repl derivation, found {n.rule}")


# ----------------------------------------------------------- contraction

def eq_contract(d: Derivation, A: Formula, cal, side: str = "left") -> Derivation:
    """Derivation of the endsequent of ``d`` with one copy of ``A`` fewer.

    ``d`` is a Ref/Repl derivation whose endsequent holds ``A`` twice on ``side``.
    """
    _check_rules(d)
    if side == "right":
        if count(d.conclusion.succ, A) < 2:
            raise TransformError(f"{A} does not occur twice in the succedent")
        return _contract_right(d, A)
    if count(d.conclusion.ante, A) < 2:
        raise TransformError(f"{A} does not occur twice in the antecedent")
    return _contract_left(d, A, _flavor(cal))


def _contract_right(d: Derivation, A: Formula) -> Derivation:
    target = d.conclusion.remove(right=[A])
    if not d.premisses:
        return node(target, d.rule, principal=d.principal, bindings=d.bindings)
    return node(target, d.rule, [_contract_right(d.premisses[0], A)], bindings=d.bindings)


def _contract_left(d: Derivation, A: Formula, flavor) -> Derivation:
    target = d.conclusion.remove(left=[A])
    if not d.premisses:
        return node(target, d.rule, principal=d.principal, bindings=d.bindings)
    p = d.premisses[0]
    if d.rule == "Ref":
        return node(target, "Ref", [_contract_left(p, A, flavor)], bindings=d.bindings)
    b = d.binding_map
    s, r, P = b["s"], b["r"], b["P"]
    eq, ps = Eq(s, r), P.fill(s)
    rest = d.conclusion.remove(left=[eq, ps])
    if A in rest.ante:
        return node(target, "Repl", [_contract_left(p, A, flavor)], bindings=d.bindings)
    # both copies of A are the active s=r and P[s]
    k = _occurrences(P.body, P.var)
    if k == 0:
        once = _contract_left(p, A, flavor)
        return _contract_left(once, A, flavor)
    if k > 1:
        return _contract_left(decompose_repl(d, flavor), A, flavor)
    assert isinstance(P.body, Eq)
    if P.body.lhs == Var(P.var):
        # P = (x = r): the premiss holds s=r twice and r=r
        q = _contract_left(p, A, flavor)
        return node(target, "Ref", [q], bindings={"t": r})
    # P = (s = x)
    w = weaken_by(d, flavor, left=[Eq(s, s)])
    mid = node(target.add(left=[Eq(s, s)]), "Repl", [w],
               bindings={"s": s, "r": r, "P": Hole("x", Eq(s, Var("x")))})
    return node(target, "Ref", [mid], bindings={"t": s})


# ------------------------------------------------- replacement chains

def _occurrences(f: Formula, x: str) -> int:
    args = (f.lhs, f.rhs) if isinstance(f, Eq) else f.args
    return sum(_occ_term(t, x) for t in args)


def _occ_term(t: Term, x: str) -> int:
    if t == Var(x):
        return 1
    if isinstance(t, Fun):
        return sum(_occ_term(a, x) for a in t.args)
    return 0


def _fill_positions(f: Formula, x: str, fill: list[Term]) -> Formula:
    """Replace the occurrences of ``x`` left to right by the terms in ``fill``."""
    it = iter(fill)

    def go(t):
        if t == Var(x):
            return next(it)
        if isinstance(t, Fun):
            return Fun(t.symbol, tuple(go(a) for a in t.args))
        return t

    if isinstance(f, Eq):
        return Eq(go(f.lhs), go(f.rhs))
    return type(f)(f.pred, tuple(go(a) for a in f.args))


def decompose_repl(d: Derivation, flavor=Flavor.C) -> Derivation:
    """Rewrite a Repl step whose hole occurs k > 1 times as k single-occurrence steps."""
    b = d.binding_map
    s, r, P = b["s"], b["r"], b["P"]
    k = _occurrences(P.body, P.var)
    if k <= 1:
        return d
    stage = [_fill_positions(P.body, P.var, [r] * j + [s] * (k - j)) for j in range(k + 1)]
    p = d.premisses[0]
    cur = weaken_by(p, flavor, left=stage[1:k])
    hole = "x"
    for j in range(k, 0, -1):
        Pj = _fill_positions(P.body, P.var, [r] * (j - 1) + [Var(hole)] + [s] * (k - j))
        concl = cur.conclusion.remove(left=[stage[j]])
        cur = node(concl, "Repl", [cur], bindings={"s": s, "r": r, "P": Hole(hole, Pj)})
    assert cur.conclusion == d.conclusion
    return cur


# ------------------------------------------------------------- cut

def eq_cut(d1: Derivation, d2: Derivation, A: Formula, cal) -> Derivation:
    """Cut-free derivation of G => D from Ref/Repl derivations of G => D, A and A, G => D."""
    _check_rules(d1)
    _check_rules(d2)
    target = d1.conclusion.remove(right=[A])
    if d2.conclusion.remove(left=[A]) != target:
        raise TransformError("eq_cut premisses must share their context")
    return _cut(d1, d2, A, target, _flavor(cal))


def _cut(d1: Derivation, d2: Derivation, A: Formula, target: Sequent, flavor) -> Derivation:
    if not d1.premisses:
        P = Bot if d1.rule == "InitBot" else d1.principal
        if target.contains([P], [P]):
            return node(target, d1.rule, principal=d1.principal)
        # P is the cut formula itself and also occurs in the shared antecedent
        return _contract_left(d2, A, flavor)
    p = d1.premisses[0]
    extra = p.conclusion.minus(d1.conclusion)
    sub = _cut(p, weaken_by(d2, flavor, left=extra.ante), A, target.add(left=extra.ante), flavor)
    return node(target, d1.rule, [sub], bindings=d1.bindings)
