"""Fresh parameters, eigenvariable renaming, weakening and substitution."""

from __future__ import annotations

from dataclasses import replace
from typing import Iterable

from ..calculus import Derivation, Flavor, Hole, LOGICAL, STRUCTURAL
from ..syntax import (
    Formula, Param, Sequent, Term, free_parameters, replace_param,
    replace_param_sequent, subst_term,
)


class TransformError(RuntimeError):
    """A transformation met an input outside its precondition."""


class InvariantError(AssertionError):
    """An internal invariant (e.g. the termination metric) was violated."""


def derivation_params(d: Derivation) -> set[str]:
    out: set[str] = set()
    for n in d:
        out |= free_parameters(n.conclusion)
        if n.eigen is not None:
            out.add(n.eigen)
        if n.term is not None:
            out |= free_parameters(n.term)
        out |= binding_params(dict(n.bindings))
    return out


def binding_params(bindings: dict) -> set[str]:
    out: set[str] = set()
    for b in bindings.values():
        out |= free_parameters(b.body if isinstance(b, Hole) else b)
    return out


class Fresh:
    """Monotone supply of parameter names ``e0, e1, ...`` avoiding a given set."""

    def __init__(self, avoid: Iterable[str] = (), prefix: str = "e"):
        self.used = set(avoid)
        self.prefix = prefix
        self.n = 0

    @classmethod
    def for_derivations(cls, *ds: Derivation, extra=()) -> "Fresh":
        used: set[str] = set(free_parameters(extra))
        for d in ds:
            used |= derivation_params(d)
        return cls(used)

    def avoid(self, *objs) -> "Fresh":
        for o in objs:
            self.used |= derivation_params(o) if isinstance(o, Derivation) else free_parameters(o)
        return self

    def __call__(self) -> str:
        while True:
            name = f"{self.prefix}{self.n}"
            self.n += 1
            if name not in self.used:
                self.used.add(name)
                return name


def _fresh(fresh: Fresh | None, *ds: Derivation, extra=()) -> Fresh:
    if fresh is None:
        return Fresh.for_derivations(*ds, extra=extra)
    fresh.avoid(*ds)
    if extra:
        fresh.used |= free_parameters(extra)
    return fresh


# ------------------------------------------------------------ renaming

def rename_eigen(d: Derivation, fresh: Fresh) -> Derivation:
    """Give ``d``'s last inference a new proper parameter."""
    new = fresh()
    ps = tuple(_sub(p, d.eigen, Param(new), {new}, fresh) for p in d.premisses)
    return replace(d, premisses=ps, eigen=new)


def make(concl: Sequent, template: Derivation, premisses, fresh: Fresh) -> Derivation:
    """Re-apply ``template``'s rule at ``concl`` over ``premisses``.

    The proper parameter is renamed when it would clash with ``concl``.
    """
    d = replace(template, conclusion=concl, premisses=tuple(premisses))
    if d.eigen is not None and d.eigen in free_parameters(concl):
        d = rename_eigen(d, fresh)
    return d


# -------------------------------------------------------- substitution

def substitute_derivation(d: Derivation, a: str, t: Term, cal=None,
                          fresh: Fresh | None = None) -> Derivation:
    """Replace parameter ``a`` by the closed term ``t`` throughout ``d``.

    Proper parameters equal to ``a`` or occurring in ``t`` are renamed first,
    so the result is a derivation of ``conclusion[a/t]`` of the same height.
    """
    if a not in derivation_params(d):
        return d
    fresh = _fresh(fresh, d, extra=[t])
    return _sub(d, a, t, free_parameters(t), fresh)


def _sub(d: Derivation, a: str, t: Term, tparams: set[str], fresh: Fresh) -> Derivation:
    if d.eigen is not None and (d.eigen == a or d.eigen in tparams):
        d = rename_eigen(d, fresh)
    m = {Param(a): t}
    bindings = tuple(
        (k, Hole(b.var, replace_param(b.body, a, t)) if isinstance(b, Hole) else subst_term(b, m))
        for k, b in d.bindings
    )
    return replace(
        d,
        conclusion=replace_param_sequent(d.conclusion, a, t),
        premisses=tuple(_sub(p, a, t, tparams, fresh) for p in d.premisses),
        principal=None if d.principal is None else replace_param(d.principal, a, t),
        term=None if d.term is None else subst_term(d.term, m),
        bindings=bindings,
    )


# ----------------------------------------------------------- weakening

def weaken(d: Derivation, side: str, formula: Formula, cal=None,
           fresh: Fresh | None = None) -> Derivation:
    """Height-preserving weakening by one formula on ``side`` ("left"/"right")."""
    if side not in ("left", "right"):
        raise ValueError(side)
    flavor = _flavor(cal)
    if side == "left":
        return weaken_by(d, flavor, left=[formula], fresh=fresh)
    return weaken_by(d, flavor, right=[formula], fresh=fresh)


def _flavor(cal) -> Flavor:
    if cal is None:
        raise TypeError("a calculus or flavor is required")
    return cal if isinstance(cal, Flavor) else cal.flavor


def weaken_by(d: Derivation, flavor, left=(), right=(), fresh: Fresh | None = None) -> Derivation:
    left, right = list(left), list(right)
    if not left and not right:
        return d
    flavor = _flavor(flavor)
    fresh = _fresh(fresh, d, extra=left + right)
    params = free_parameters(left + right)
    if left:
        d = _wk(d, True, left, params, flavor, fresh)
    if right:
        d = _wk(d, False, right, params, flavor, fresh)
    return d


def weaken_to(d: Derivation, target: Sequent, flavor, fresh: Fresh | None = None) -> Derivation:
    """Weaken ``d`` until its endsequent is ``target`` (which must contain it)."""
    if not d.conclusion.issubsequent(target):
        raise TransformError(f"cannot weaken {d.conclusion} to {target}")
    extra = target.minus(d.conclusion)
    return weaken_by(d, flavor, extra.ante, extra.succ, fresh)


def _wk(d: Derivation, left: bool, fs: list, params: set[str], flavor: Flavor,
        fresh: Fresh) -> Derivation:
    if d.eigen is not None and d.eigen in params:
        d = rename_eigen(d, fresh)
    concl = d.conclusion.add(left=fs) if left else d.conclusion.add(right=fs)
    ps = d.premisses
    if not ps or (not left and flavor.intuitionistic and d.rule in ("Rimp", "Rall")):
        return replace(d, conclusion=concl)
    if d.rule == "Cut":
        i = 0 if left else 1
        ps = ps[:i] + (_wk(ps[i], left, fs, params, flavor, fresh),) + ps[i + 1:]
    elif d.rule not in STRUCTURAL and d.rule not in LOGICAL:
        # extension rule: the inert context of the first premiss absorbs the new formulas
        ps = (_wk(ps[0], left, fs, params, flavor, fresh),) + ps[1:]
    else:
        ps = tuple(_wk(p, left, fs, params, flavor, fresh) for p in ps)
    return replace(d, conclusion=concl, premisses=ps)

