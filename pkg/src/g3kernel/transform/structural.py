"""Expanding admitted structural rules and eliminating them from derivations."""

from __future__ import annotations

from typing import Protocol

from ..calculus import (
    Calculus, Derivation, Flavor, builtin_equality_extension, is_logic_free, node,
)
from ..syntax import (
    And, Bot, Exists, Forall, Formula, Imp, Or, Param, Sequent, free_parameters,
    is_atomic, substitute_formula,
)
from .base import Fresh, TransformError, _fresh, weaken_by
from .core import _core
from .equality import eq_contract, eq_cut
from .separation import separate


# ---------------------------------------------------- identity derivations

def identity_derivation(F: Formula, left=(), right=(), flavor=Flavor.C,
                        fresh: Fresh | None = None) -> Derivation:
    """Cut-free derivation of ``F, left => right, F``."""
    flavor = Flavor(flavor)
    if fresh is None:
        fresh = Fresh(free_parameters([F, *left, *right]))
    else:
        fresh.avoid(F, *left, *right)
    ctx = Sequent.of(left, right)
    return _id(F, ctx, flavor, fresh)


def _id(F: Formula, ctx: Sequent, flavor: Flavor, fresh: Fresh) -> Derivation:
    concl = ctx.add(left=[F], right=[F])
    if is_atomic(F):
        return node(concl, "Init", principal=F)
    if F == Bot:
        if flavor is Flavor.M:
            return node(concl, "InitBot")
        return node(concl, "LBot", principal=Bot)
    if isinstance(F, And):
        B, C = F.left, F.right
        lhs = concl.remove(left=[F]).add(left=[B, C])
        base = lhs.remove(right=[F])
        rb = _id(B, base.remove(left=[B]), flavor, fresh)
        rc = _id(C, base.remove(left=[C]), flavor, fresh)
        r = node(lhs, "Rand", [rb, rc], principal=F)
        return node(concl, "Land", [r], principal=F)
    if isinstance(F, Or):
        B, C = F.left, F.right
        rest = concl.remove(left=[F], right=[F])
        lb = _id(B, rest.add(right=[C]), flavor, fresh)
        lc = _id(C, rest.add(right=[B]), flavor, fresh)
        orb = node(rest.add(left=[B], right=[F]), "Ror", [lb], principal=F)
        orc = node(rest.add(left=[C], right=[F]), "Ror", [lc], principal=F)
        return node(concl, "Lor", [orb, orc], principal=F)
    if isinstance(F, Imp):
        B, C = F.left, F.right
        rest = concl.remove(left=[F], right=[F])
        if flavor.intuitionistic:
            # R->, then L-> on B, F, rest => C
            seq = Sequent.of((*rest.ante, F, B), [C])
            p0 = _id(B, Sequent.of((*rest.ante, F), [C]), flavor, fresh)
            p1 = _id(C, Sequent.of((*rest.ante, B), []), flavor, fresh)
            li = node(seq, "Limp", [p0, p1], principal=F)
            return node(concl, "Rimp", [li], principal=F)
        seq = rest.add(left=[F, B], right=[C])
        p0 = _id(B, rest.add(right=[C]), flavor, fresh)
        p1 = _id(C, rest.add(left=[B]), flavor, fresh)
        li = node(seq, "Limp", [p0, p1], principal=F)
        return node(concl, "Rimp", [li], principal=F)
    if isinstance(F, Forall):
        a = fresh()
        inst = substitute_formula(F.body, F.var, Param(a))
        rest = concl.remove(left=[F], right=[F])
        inner = _id(inst, Sequent.of((*rest.ante, F), () if flavor.intuitionistic else rest.succ),
                    flavor, fresh)
        la = node(inner.conclusion.remove(left=[inst]), "Lall", [inner], principal=F,
                  term=Param(a))
        return node(concl, "Rall", [la], principal=F, eigen=a)
    if isinstance(F, Exists):
        a = fresh()
        inst = substitute_formula(F.body, F.var, Param(a))
        rest = concl.remove(left=[F], right=[F])
        inner = _id(inst, rest.add(right=[F]), flavor, fresh)
        re = node(inner.conclusion.remove(right=[inst]), "Rex", [inner], principal=F,
                  term=Param(a))
        return node(concl, "Lex", [re], principal=F, eigen=a)
    raise TypeError(f"unexpected formula {F!r}")


# ----------------------------------------------------- expansion step

def expand_structural(d: Derivation, cal: Calculus, fresh: Fresh | None = None) -> Derivation:
    """Replace Cut, weakening and contraction steps using Cutcs and logical rules only."""
    fresh = _fresh(fresh, d)
    return _expand(d, cal.flavor, fresh)


def _expand(d: Derivation, flavor: Flavor, fresh: Fresh) -> Derivation:
    ps = [_expand(p, flavor, fresh) for p in d.premisses]
    c, F, r = d.conclusion, d.principal, d.rule
    if r == "Cut":
        d1, d2 = ps
        gd = d1.conclusion.remove(right=[F])
        lt = d2.conclusion.remove(left=[F])
        w1 = weaken_by(d1, flavor, lt.ante, lt.succ, fresh)
        w2 = weaken_by(d2, flavor, gd.ante, gd.succ, fresh)
        return node(c, "Cutcs", [w1, w2], principal=F)
    if r == "LC":
        ctx = c.remove(left=[F])
        ident = _id(F, ctx, flavor, fresh)
        return node(c, "Cutcs", [ident, ps[0]], principal=F)
    if r == "RC":
        ctx = c.remove(right=[F])
        ident = _id(F, ctx, flavor, fresh)
        return node(c, "Cutcs", [ps[0], ident], principal=F)
    if r == "LW":
        return weaken_by(ps[0], flavor, left=[F], fresh=fresh)
    if r == "RW":
        return weaken_by(ps[0], flavor, right=[F], fresh=fresh)
    if not ps:
        return d
    return node(c, r, ps, principal=F, term=d.term, eigen=d.eigen, bindings=d.bindings)


# --------------------------------------------------------- normalisers

class NormalizerError(TransformError):
    pass


class RNormalizer(Protocol):
    """Contraction and Cutcs admissibility for logic-free derivations of an extension."""

    def contract(self, d: Derivation, A: Formula, side: str) -> Derivation: ...

    def cut(self, d1: Derivation, d2: Derivation, A: Formula) -> Derivation: ...


class InitialNormalizer:
    """For the empty extension: logic-free derivations are initial sequents."""

    def __init__(self, cal: Calculus):
        self.cal = cal

    def _axiom(self, s: Sequent) -> Derivation:
        for P in s.ante:
            if P in s.succ:
                if is_atomic(P):
                    return node(s, "Init", principal=P)
                if P == Bot and self.cal.flavor is Flavor.M:
                    return node(s, "InitBot")
        raise NormalizerError(f"{s} is not an initial sequent")

    def contract(self, d, A, side):
        s = d.conclusion.remove(left=[A]) if side == "left" else d.conclusion.remove(right=[A])
        return self._axiom(s)

    def cut(self, d1, d2, A):
        return self._axiom(d1.conclusion.remove(right=[A]))


class EqualityNormalizer:
    """For the Ref/Repl extension."""

    def __init__(self, cal: Calculus):
        self.cal = cal

    def contract(self, d, A, side):
        return eq_contract(d, A, self.cal, side)

    def cut(self, d1, d2, A):
        return eq_cut(d1, d2, A, self.cal)


class CoreNormalizer:
    """Fallback for custom extensions: succeeds only when an atomic core avoids the cut formula."""

    def __init__(self, cal: Calculus):
        self.cal = cal

    def contract(self, d, A, side):
        raise NormalizerError("no contraction procedure for this extension")

    def cut(self, d1, d2, A):
        target = d1.conclusion.remove(right=[A])
        fresh = Fresh.for_derivations(d1, d2)
        for d in (d1, d2):
            c, dc = _core(d, self.cal, fresh)
            if c.issubsequent(target):
                return weaken_by(dc, self.cal, *_extra(target, c), fresh=fresh)
        raise NormalizerError(
            f"cannot eliminate a context-sharing cut on {A} for this extension")


def _extra(target: Sequent, c: Sequent):
    e = target.minus(c)
    return e.ante, e.succ


def default_normalizer(cal: Calculus) -> RNormalizer:
    if not cal.extension:
        return InitialNormalizer(cal)
    if set(cal.extension) == set(builtin_equality_extension()):
        return EqualityNormalizer(cal)
    return CoreNormalizer(cal)


# ------------------------------------------------------------ driver

def eliminate_structural(d: Derivation, cal: Calculus, normalizer: RNormalizer | None = None,
                         fresh: Fresh | None = None) -> Derivation:
    """Derivation of the same endsequent using no structural rule."""
    fresh = _fresh(fresh, d)
    norm = normalizer or default_normalizer(cal)
    expanded = _expand(d, cal.flavor, fresh)
    sep = separate(expanded, cal.with_admitted("Cutcs"), fresh)
    return _normalize(sep, norm)


def _normalize(d: Derivation, norm: RNormalizer) -> Derivation:
    if "Cutcs" not in {n.rule for n in d}:
        return d
    if is_logic_free(d):
        return _norm_free(d, norm)
    ps = [_normalize(p, norm) for p in d.premisses]
    return node(d.conclusion, d.rule, ps, principal=d.principal, term=d.term,
                eigen=d.eigen, bindings=d.bindings)


def _norm_free(d: Derivation, norm: RNormalizer) -> Derivation:
    ps = [_norm_free(p, norm) for p in d.premisses]
    if d.rule == "Cutcs":
        return norm.cut(ps[0], ps[1], d.principal)
    if not ps:
        return d
    return node(d.conclusion, d.rule, ps, principal=d.principal, bindings=d.bindings)
