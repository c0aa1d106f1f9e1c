"""Permuting logical inferences below extension rules and context-sharing cuts."""

from __future__ import annotations

from ..calculus import (
    Calculus, Derivation, INITIAL, LEFT_RULES, LOGICAL, RIGHT_RULES, STRUCTURAL,
    height, is_logic_free, is_separated, logical_premisses, node, rule_for,
    schema_conclusion,
)
from ..syntax import (
    And, Bot, Exists, Forall, Formula, Imp, Or, Sequent, formula_height,
    free_parameters, substitute_formula,
)
from .base import (
    Fresh, InvariantError, TransformError, _fresh, binding_params, make, rename_eigen,
    substitute_derivation, weaken_by, weaken_to,
)
from .core import _core, invert


# ------------------------------------------------- extension-rule step

def separate_r_inference(premisses, rule: str, bindings, cal: Calculus,
                         fresh: Fresh | None = None) -> Derivation:
    """Separated derivation of the conclusion of ``rule`` applied to ``premisses``.

    Every premiss derivation must already be separated.
    """
    schema = cal.schema(rule)
    if schema is None:
        raise TransformError(f"{rule} is not an extension rule of this calculus")
    premisses = list(premisses)
    for p in premisses:
        if not is_separated(p):
            raise TransformError("premiss derivations must be separated")
    b = dict(bindings)
    fresh = _fresh(fresh, *premisses)
    return _sep_r(premisses, schema, b, cal, fresh)


def _sep_r(ps: list[Derivation], schema, b: dict, cal: Calculus, fresh: Fresh) -> Derivation:
    target = schema_conclusion(schema, b, [p.conclusion for p in ps])
    k = next((i for i, p in enumerate(ps) if not is_logic_free(p)), None)
    if k is None:
        return node(target, schema.name, ps, bindings=b)
    dk = ps[k]
    rho = dk.rule
    if rho == "LBot":
        return node(target, "LBot", principal=Bot)
    if dk.eigen is not None:
        seen = free_parameters(target) | binding_params(b)
        for i, p in enumerate(ps):
            if i != k:
                seen |= free_parameters(p.conclusion)
        if dk.eigen in seen:
            dk = rename_eigen(dk, fresh)
    actives, _ = schema.instantiate(b)
    if cal.flavor.intuitionistic and rho in ("Rimp", "Rall"):
        e0 = weaken_by(dk.premisses[0], cal, right=actives[k].succ, fresh=fresh)
        sub = _sep_r(ps[:k] + [e0] + ps[k + 1:], schema, b, cal, fresh)
        want = logical_premisses(rho, cal.flavor, target, dk.principal, None, dk.eigen)[0]
        if sub.conclusion != want:
            raise TransformError(
                f"cannot permute {rho} below {schema.name}: the rule has right-hand actives "
                "or a multi-formula succedent")
        return make(target, dk, [sub], fresh)
    new = [_sep_r(ps[:k] + [e] + ps[k + 1:], schema, b, cal, fresh) for e in dk.premisses]
    return make(target, dk, new, fresh)


# ------------------------------------------------------- cut step

def separate_cutcs(D: Derivation, E: Derivation, A: Formula, cal: Calculus,
                   fresh: Fresh | None = None, trace: list | None = None) -> Derivation:
    """Separated derivation of G => Dl from separated D: G => Dl, A and E: A, G => Dl.

    If ``trace`` is a list, every recursive cut appends ``(bound, metric)``.
    """
    target = D.conclusion.remove(right=[A])
    if E.conclusion.remove(left=[A]) != target:
        raise TransformError("Cutcs premisses must share their context")
    for x in (D, E):
        if not is_separated(x):
            raise TransformError("premiss derivations must be separated")
    fresh = _fresh(fresh, D, E)
    return _Cut(cal, fresh, trace).cut(D, E, A, None)


class _Cut:
    def __init__(self, cal: Calculus, fresh: Fresh, trace: list | None = None):
        self.cal = cal
        self.trace = trace
        self.flavor = cal.flavor
        self.fresh = fresh

    def wk(self, d, left=(), right=()):
        return weaken_by(d, self.flavor, left, right, self.fresh)

    def wk_to(self, d, s):
        return weaken_to(d, s, self.flavor, self.fresh)

    def cut(self, D: Derivation, E: Derivation, A: Formula, bound) -> Derivation:
        metric = (formula_height(A), height(D) + height(E))
        if self.trace is not None:
            self.trace.append((bound, metric))
        if bound is not None and not metric < bound:
            raise InvariantError(f"cut metric {metric} did not decrease below {bound}")
        target = D.conclusion.remove(right=[A])
        lfD, lfE = is_logic_free(D), is_logic_free(E)
        if lfD and lfE:
            return node(target, "Cutcs", [D, E], principal=A)
        if lfD:
            return self._free_left(D, E, A, target, metric)
        if lfE:
            return self._free_right(D, E, A, target, metric)
        intu = self.flavor.intuitionistic
        rho = D.rule
        if not (rho in RIGHT_RULES and D.principal == A):
            # A is not principal in D
            if rho == "LBot":
                return node(target, "LBot", principal=Bot)
            if intu and rho in ("Rimp", "Rall"):
                return make(target, D, D.premisses, self.fresh)
            parts = invert(E, rho, D.principal, self.cal, D.term, D.eigen, self.fresh)
            res = [self.cut(d_j, parts[j], A, metric) for j, d_j in enumerate(D.premisses)]
            return make(target, D, res, self.fresh)
        sigma = E.rule
        if not (sigma in LEFT_RULES and E.principal == A):
            if sigma == "LBot":
                return node(target, "LBot", principal=Bot)
            if intu and sigma in ("Rimp", "Rall"):
                if rho in ("Rimp", "Rall"):
                    return self._push(D, E, A, target, metric)
                left = rule_for(type(A), True)
                eig = self.fresh() if isinstance(A, Exists) else None
                parts = invert(E, left, A, self.cal, None, eig, self.fresh)
                return self._principal(D, E, A, target, parts, None, eig, metric)
            parts = invert(D, sigma, E.principal, self.cal, E.term, E.eigen, self.fresh)
            res = [self.cut(parts[j], e_j, A, metric) for j, e_j in enumerate(E.premisses)]
            return make(target, E, res, self.fresh)
        return self._principal(D, E, A, target, list(E.premisses), E.term, E.eigen, metric)

    # one side logic-free ------------------------------------------
    def _free_left(self, D, E, A, target, metric):
        c, dc = _core(D, self.cal, self.fresh)
        if c.issubsequent(target):
            return self.wk_to(dc, target)
        sigma = E.rule
        if sigma == "LBot":
            return node(target, "LBot", principal=Bot)
        res = []
        for e_j in E.premisses:
            sub = e_j.conclusion.remove(left=[A]).add(right=[A])
            if not c.issubsequent(sub):
                raise TransformError(
                    f"atomic core {c} does not fit premiss {sub} of {sigma}")
            res.append(self.cut(self.wk_to(dc, sub), e_j, A, metric))
        return make(target, E, res, self.fresh)

    def _free_right(self, D, E, A, target, metric):
        c, ec = _core(E, self.cal, self.fresh)
        if c.issubsequent(target):
            return self.wk_to(ec, target)
        rho = D.rule
        if rho == "LBot":
            return node(target, "LBot", principal=Bot)
        if self.flavor.intuitionistic and rho in ("Rimp", "Rall"):
            return make(target, D, D.premisses, self.fresh)
        res = []
        for d_j in D.premisses:
            sub = d_j.conclusion.remove(right=[A]).add(left=[A])
            res.append(self.cut(d_j, self.wk_to(ec, sub), A, metric))
        return make(target, D, res, self.fresh)

    # principal cases -------------------------------------------------
    def _push(self, D, E, A, target, metric):
        """A is an implication or universal and E ends with a single-succedent right rule."""
        e0 = E.premisses[0]
        plus = e0.conclusion.remove(left=[A])
        extra = Sequent.of(plus.ante).minus(Sequent.of(target.ante)).ante
        if D.eigen is not None and D.eigen in free_parameters(plus):
            D = rename_eigen(D, self.fresh)
        d0 = self.wk(D.premisses[0], left=extra)
        Ds = make(plus.add(right=[A]), D, [d0], self.fresh)
        return make(target, E, [self.cut(Ds, e0, A, metric)], self.fresh)

    def _principal(self, D, E, A, target, parts, term, eigen, metric):
        cut = self.cut
        intu = self.flavor.intuitionistic
        if isinstance(A, And):
            B, C = A.left, A.right
            d0, d1 = D.premisses
            r1 = cut(self.wk(d0, left=[C]), parts[0], B, metric)
            return cut(d1, r1, C, metric)
        if isinstance(A, Or):
            B, C = A.left, A.right
            d0 = D.premisses[0]
            r1 = cut(d0, self.wk(parts[1], right=[B]), C, metric)
            return cut(r1, parts[0], B, metric)
        if isinstance(A, Imp):
            B, C = A.left, A.right
            d0 = D.premisses[0]
            if not intu:
                r1 = cut(d0, self.wk(parts[1], left=[B]), C, metric)
                return cut(parts[0], r1, B, metric)
            Dw = make(target.add(right=[B, A]), D, [d0], self.fresh)
            r1 = cut(Dw, parts[0], A, metric)
            r2 = cut(self.wk(d0, right=target.succ), self.wk(parts[1], left=[B]), C, metric)
            return cut(r1, r2, B, metric)
        if isinstance(A, Forall):
            inst = substitute_formula(A.body, A.var, term)
            r1 = cut(self.wk(D, left=[inst]), parts[0], A, metric)
            ds = substitute_derivation(D.premisses[0], D.eigen, term, self.cal, self.fresh)
            ds = self.wk_to(ds, target.add(right=[inst]))
            return cut(ds, r1, inst, metric)
        if isinstance(A, Exists):
            inst = substitute_formula(A.body, A.var, D.term)
            r1 = cut(D.premisses[0], self.wk(E, right=[inst]), A, metric)
            es = substitute_derivation(parts[0], eigen, D.term, self.cal, self.fresh)
            return cut(r1, es, inst, metric)
        raise TransformError(f"no principal reduction for {A}")


# ---------------------------------------------------------- driver

def separate(d: Derivation, cal: Calculus, fresh: Fresh | None = None,
             trace: list | None = None) -> Derivation:
    """Separated derivation of the same endsequent.

    ``d`` may use ``Cutcs`` but no other structural rule.
    """
    bad = {n.rule for n in d} & (STRUCTURAL - {"Cutcs"})
    if bad:
        raise TransformError(f"separate does not handle {sorted(bad)}; expand them first")
    fresh = _fresh(fresh, d)
    out = _separate(d, cal, fresh, trace)
    if out.conclusion != d.conclusion:
        raise AssertionError("separation changed the endsequent")
    return out


def _separate(d: Derivation, cal: Calculus, fresh: Fresh, trace=None) -> Derivation:
    if not d.premisses or is_separated(d):
        return d
    ps = [_separate(p, cal, fresh, trace) for p in d.premisses]
    r = d.rule
    if r in LOGICAL or r in INITIAL:
        return make(d.conclusion, d, ps, fresh)
    if r == "Cutcs":
        return _Cut(cal, fresh, trace).cut(ps[0], ps[1], d.principal, None)
    schema = cal.schema(r)
    if schema is None:
        raise TransformError(f"unknown rule {r}")
    return _sep_r(ps, schema, d.binding_map, cal, fresh)
