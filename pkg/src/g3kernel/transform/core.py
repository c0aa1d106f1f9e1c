"""Atomic cores of logic-free derivations and height-preserving inversion."""

from __future__ import annotations

from ..calculus import (
    EIGEN_RULES, INITIAL, LEFT_RULES, LOGICAL, STRUCTURAL, TERM_RULES, Calculus, Derivation,
    RuleError,
    invertible, is_logic_free, is_separated, logical_premisses, node, schema_conclusion,
)
from ..syntax import Bot, Formula, Param, Sequent, Term
from .base import (
    Fresh, TransformError, _fresh, derivation_params, make,
    substitute_derivation, weaken_to,
)


class NotInvertible(TransformError):
    pass


# ---------------------------------------------------------- atomic core

def atomic_core(d: Derivation, cal: Calculus, fresh: Fresh | None = None
                ) -> tuple[Sequent, Derivation]:
    """Atomic subsequent of ``d``'s endsequent derivable with no greater height.

    ``d`` must be logic-free.  The returned derivation uses only rules of
    ``d`` (and no logical rule); it keeps ``Cutcs`` only if ``d`` does.
    """
    if not is_logic_free(d):
        raise TransformError("atomic_core needs a logic-free derivation")
    if any(n.rule in STRUCTURAL - {"Cutcs"} for n in d):
        raise TransformError("atomic_core does not handle structural rules other than Cutcs")
    fresh = _fresh(fresh, d)
    return _core(d, cal, fresh)


def _core(d: Derivation, cal: Calculus, fresh: Fresh) -> tuple[Sequent, Derivation]:
    rule = d.rule
    if rule == "Init":
        s = Sequent.of([d.principal], [d.principal])
        return s, node(s, "Init", principal=d.principal)
    if rule == "InitBot":
        s = Sequent.of([Bot], [Bot])
        return s, node(s, "InitBot")
    if rule == "Cutcs":
        A = d.principal
        c1, d1 = _core(d.premisses[0], cal, fresh)
        if c1.issubsequent(d.conclusion):
            return c1, d1
        c2, d2 = _core(d.premisses[1], cal, fresh)
        if c2.issubsequent(d.conclusion):
            return c2, d2
        ctx = c1.remove(right=[A]).lub(c2.remove(left=[A]))
        e1 = weaken_to(d1, ctx.add(right=[A]), cal, fresh)
        e2 = weaken_to(d2, ctx.add(left=[A]), cal, fresh)
        return ctx, node(ctx, "Cutcs", [e1, e2], principal=A)
    schema = cal.schema(rule)
    if schema is None:
        raise TransformError(f"unexpected rule {rule} in a logic-free derivation")
    b = d.binding_map
    actives, out = schema.instantiate(b)
    if not actives:
        return out, node(out, rule, bindings=d.bindings)
    cores = []
    for p in d.premisses:
        c, dc = _core(p, cal, fresh)
        if c.issubsequent(d.conclusion):
            # the rule is redundant here: a shorter core already fits
            return c, dc
        cores.append((c, dc))
    ps = []
    for (c, dc), q in zip(cores, actives):
        ps.append(weaken_to(dc, c.lub(q), cal, fresh))
    concl = schema_conclusion(schema, b, [p.conclusion for p in ps])
    return concl, node(concl, rule, ps, bindings=d.bindings)


# ------------------------------------------------------------ inversion

def invert(d: Derivation, rule: str, principal: Formula, cal: Calculus,
           term: Term | None = None, eigen: str | None = None,
           fresh: Fresh | None = None) -> list[Derivation]:
    """Derivations of the premisses of ``rule`` applied to ``d``'s endsequent.

    ``d`` must be separated and ``rule`` invertible in ``cal``'s flavor.  Each
    returned derivation has height at most ``height(d)``.
    """
    flavor = cal.flavor
    if not invertible(rule, flavor):
        raise NotInvertible(f"{rule} is not invertible in G3{flavor.value}")
    if not is_separated(d):
        raise TransformError("invert needs a separated derivation")
    fresh = _fresh(fresh, d, extra=[principal] + ([term] if term is not None else []))
    if rule in TERM_RULES and term is None:
        raise TransformError(f"inverting {rule} needs an instantiation term")
    if rule in EIGEN_RULES and eigen is None:
        eigen = fresh()
    try:
        targets = logical_premisses(rule, flavor, d.conclusion, principal, term, eigen)
    except RuleError as e:
        raise TransformError(f"cannot invert {rule} on {principal}: {e}") from None
    if rule in EIGEN_RULES and eigen in derivation_params(d):
        # invert with a globally fresh name, then rename to the requested one
        tmp = fresh()
        tt = logical_premisses(rule, flavor, d.conclusion, principal, term, tmp)
        res = [_inv(d, rule, principal, k, tt[k], cal, fresh, term, tmp)
               for k in range(len(tt))]
        res = [substitute_derivation(r, tmp, Param(eigen), cal, fresh) for r in res]
    else:
        res = [_inv(d, rule, principal, k, targets[k], cal, fresh, term, eigen)
               for k in range(len(targets))]
    for r, t in zip(res, targets):
        if r.conclusion != t:
            raise AssertionError(f"inversion produced {r.conclusion}, expected {t}")
    return res


def invert_one(d: Derivation, rule: str, principal: Formula, k: int, cal: Calculus,
               term=None, eigen=None, fresh: Fresh | None = None) -> Derivation:
    return invert(d, rule, principal, cal, term, eigen, fresh)[k]


def _inv(d: Derivation, rule: str, F: Formula, k: int, target: Sequent, cal: Calculus,
         fresh: Fresh, term, eigen) -> Derivation:
    flavor = cal.flavor
    if d.conclusion.issubsequent(target):
        return weaken_to(d, target, cal, fresh)
    r = d.rule
    if r in INITIAL or r == "LBot":
        return node(target, r, principal=d.principal)
    if r in LOGICAL:
        if r == rule and d.principal == F:
            p = d.premisses[k]
            if r in EIGEN_RULES and d.eigen != eigen:
                p = substitute_derivation(p, d.eigen, Param(eigen), cal, fresh)
            return p
        if flavor.intuitionistic and r in ("Rimp", "Rall") and rule not in LEFT_RULES:
            # the inverted formula sits in the discarded succedent
            return make(target, d, d.premisses, fresh)
        new = []
        for p in d.premisses:
            sub = logical_premisses(rule, flavor, p.conclusion, F, term, eigen)[k]
            new.append(_inv(p, rule, F, k, sub, cal, fresh, term, eigen))
        return make(target, d, new, fresh)
    if r in STRUCTURAL and r != "Cutcs":
        raise TransformError(f"cannot invert through {r}")
    c, dc = _core(d, cal, fresh)
    return weaken_to(dc, target, cal, fresh)

