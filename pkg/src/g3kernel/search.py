"""Bounded backward proof search and exhaustive refutation below a height."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Iterator

from .calculus import (
    AtomicRuleSchema, Calculus, Derivation, Flavor, Hole, check_derivation, height,
    instantiate_pattern, logical_premisses, node,
)
from .syntax import (
    And, Atom, Bot, Eq, Exists, Forall, Formula, Fun, HoleAtom, Imp, Meta, Or, Param,
    Sequent, Term, Var, free_parameters, function_symbols, is_atomic, subterms, term_depth,
)


class SearchError(RuntimeError):
    pass


class BudgetExhausted(SearchError):
    """The time budget ran out before the bounded search space was covered."""


class UniverseTooLarge(SearchError):
    pass


@dataclass(frozen=True)
class SearchBudget:
    max_height: int
    max_term_depth: int = 1
    time_ms: int = 10_000

    def __post_init__(self):
        if self.max_height < 0 or self.max_term_depth < 0 or self.time_ms <= 0:
            raise ValueError("search budget fields must be non-negative (time positive)")


@dataclass(frozen=True)
class Refutation:
    """Outcome of an exhaustive search: ``status`` is "exhaustive-no" or "witness"."""

    status: str
    witness: Derivation | None = None
    height: int = 0

    @property
    def exhaustive_no(self) -> bool:
        return self.status == "exhaustive-no"


# ------------------------------------------------------- term universe

MAX_UNIVERSE = 2000


def term_universe(goal: Sequent, max_term_depth: int, limit: int = MAX_UNIVERSE) -> frozenset[Term]:
    """Closed subterms of ``goal`` closed under its function symbols up to ``max_term_depth``.

    A goal without parameters gets the single constant ``c``.
    """
    base = set(subterms(goal))
    params = {Param(p) for p in free_parameters(goal)}
    if not params and not any(isinstance(t, Fun) and not t.args for t in base):
        params = {Param("c")}
    base |= params
    symbols = function_symbols(goal)
    out = set(base)
    for _ in range(max_term_depth):
        new = set()
        pool = sorted(out, key=repr)
        for sym, n in sorted(symbols.items()):
            for args in itertools.product(pool, repeat=n):
                t = Fun(sym, tuple(args))
                if term_depth(t) <= max_term_depth and t not in out:
                    new.add(t)
                    if len(out) + len(new) > limit:
                        raise UniverseTooLarge(
                            f"term universe exceeds {limit} terms; lower the term depth")
        if not new:
            break
        out |= new
    return frozenset(out)


# ------------------------------------------------------------ matching

HOLE_VAR = "x"


def match_term(pat: Term, t: Term, b: dict) -> dict | None:
    if isinstance(pat, Meta):
        cur = b.get(pat.name)
        if cur is None:
            b2 = dict(b)
            b2[pat.name] = t
            return b2
        return b if cur == t else None
    if isinstance(pat, Fun):
        if not isinstance(t, Fun) or t.symbol != pat.symbol or len(t.args) != len(pat.args):
            return None
        for p, a in zip(pat.args, t.args):
            b = match_term(p, a, b)
            if b is None:
                return None
        return b
    return b if pat == t else None


def _ground(pat: Term, b: dict) -> Term | None:
    if isinstance(pat, Meta):
        return b.get(pat.name)
    if isinstance(pat, Fun):
        args = [_ground(a, b) for a in pat.args]
        return None if any(a is None for a in args) else Fun(pat.symbol, tuple(args))
    return pat


def _atom_args(f: Formula) -> tuple:
    return (f.lhs, f.rhs) if isinstance(f, Eq) else f.args


def _rebuild(f: Formula, args) -> Formula:
    return Eq(*args) if isinstance(f, Eq) else Atom(f.pred, tuple(args))


def _positions(t: Term, s: Term, path=()) -> list:
    if t == s:
        return [path]
    if isinstance(t, Fun):
        return [p for i, a in enumerate(t.args) for p in _positions(a, s, path + (i,))]
    return []


def _replace_at(t: Term, path, new: Term) -> Term:
    if not path:
        return new
    i = path[0]
    args = list(t.args)
    args[i] = _replace_at(args[i], path[1:], new)
    return Fun(t.symbol, tuple(args))


def abstractions(f: Formula, s: Term) -> Iterator[Hole]:
    """Every hole P with P[s] = f, one per subset of the occurrences of s in f."""
    args = _atom_args(f)
    occ = [(i, p) for i, a in enumerate(args) for p in _positions(a, s)]
    for k in range(len(occ) + 1):
        for chosen in itertools.combinations(occ, k):
            new = list(args)
            for i, p in chosen:
                new[i] = _replace_at(new[i], p, Var(HOLE_VAR))
            yield Hole(HOLE_VAR, _rebuild(f, new))


def match_formula(pat: Formula, f: Formula, b: dict) -> Iterator[dict]:
    if isinstance(pat, HoleAtom):
        if not is_atomic(f):
            return
        t = _ground(pat.arg, b)
        cands = [t] if t is not None else sorted(subterms(f), key=repr)
        for c in cands:
            b1 = b if t is not None else match_term(pat.arg, c, b)
            if b1 is None:
                continue
            hole = b1.get(pat.name)
            if hole is not None:
                if hole.fill(c) == f:
                    yield b1
                continue
            for h in abstractions(f, c):
                b2 = dict(b1)
                b2[pat.name] = h
                yield b2
        return
    if isinstance(pat, Eq):
        if isinstance(f, Eq):
            b1 = match_term(pat.lhs, f.lhs, b)
            if b1 is not None:
                b1 = match_term(pat.rhs, f.rhs, b1)
            if b1 is not None:
                yield b1
        return
    if isinstance(pat, Atom):
        if isinstance(f, Atom) and f.pred == pat.pred and len(f.args) == len(pat.args):
            b1 = b
            for p, a in zip(pat.args, f.args):
                b1 = match_term(p, a, b1)
                if b1 is None:
                    return
            yield b1


def match_actives(actives: Sequent, s: Sequent, b: dict | None = None) -> Iterator[dict]:
    """Bindings under which the pattern ``actives`` is a subsequent of ``s``."""
    pats = [(True, p) for p in actives.ante] + [(False, p) for p in actives.succ]
    # holes last, so their argument terms are bound by the other patterns
    pats.sort(key=lambda x: isinstance(x[1], HoleAtom))
    seen = set()
    for res in _match_seq(pats, list(s.ante), list(s.succ), b or {}):
        key = tuple(sorted(res.items(), key=lambda kv: kv[0]))
        if key not in seen:
            seen.add(key)
            yield res


def _match_seq(pats, ante, succ, b) -> Iterator[dict]:
    if not pats:
        yield b
        return
    (left, p), rest = pats[0], pats[1:]
    pool = ante if left else succ
    tried = set()
    for i, f in enumerate(pool):
        if f in tried:
            continue
        tried.add(f)
        remaining = pool[:i] + pool[i + 1:]
        for b1 in match_formula(p, f, b):
            if left:
                yield from _match_seq(rest, remaining, succ, b1)
            else:
                yield from _match_seq(rest, ante, remaining, b1)


def schema_instances(schema: AtomicRuleSchema, s: Sequent,
                     universe) -> Iterator[tuple[dict, list[Sequent]]]:
    """Backward applications of ``schema`` to ``s``: (bindings, premiss sequents)."""
    terms, holes = schema.metavariables()
    concl_terms, concl_holes = _pattern_metas(schema.conclusion)
    free_holes = holes - concl_holes
    if free_holes:
        raise SearchError(f"{schema.name}: hole metavariables {sorted(free_holes)} occur only "
                          "in premisses; search cannot enumerate them")
    free_terms = sorted(terms - concl_terms)
    for b in match_actives(schema.conclusion, s):
        matched_out = _instantiate_seq(schema.conclusion, b)
        ctx = s.remove(matched_out.ante, matched_out.succ)
        for extra in itertools.product(sorted(universe, key=repr), repeat=len(free_terms)):
            full = dict(b)
            full.update(zip(free_terms, extra))
            actives, _ = schema.instantiate(full)
            if not actives:
                yield full, []
                continue
            for split in _splits(ctx, len(actives)):
                yield full, [q.add(c.ante, c.succ) for q, c in zip(actives, split)]


def _instantiate_seq(pat: Sequent, b: dict) -> Sequent:
    return Sequent.of([instantiate_pattern(f, b) for f in pat.ante],
                      [instantiate_pattern(f, b) for f in pat.succ])


def _pattern_metas(s: Sequent) -> tuple[set[str], set[str]]:
    terms: set[str] = set()
    holes: set[str] = set()

    def walk(t):
        if isinstance(t, Meta):
            terms.add(t.name)
        elif isinstance(t, Fun):
            for a in t.args:
                walk(a)

    for f in s.formulas():
        if isinstance(f, HoleAtom):
            holes.add(f.name)
            walk(f.arg)
        else:
            for a in _atom_args(f):
                walk(a)
    return terms, holes


def _splits(ctx: Sequent, n: int) -> Iterator[list[Sequent]]:
    if n == 1:
        yield [ctx]
        return
    items = [(True, f) for f in ctx.ante] + [(False, f) for f in ctx.succ]
    seen = set()
    for assign in itertools.product(range(n), repeat=len(items)):
        parts = [([], []) for _ in range(n)]
        for (left, f), k in zip(items, assign):
            parts[k][0 if left else 1].append(f)
        out = [Sequent.of(a, s) for a, s in parts]
        key = tuple(out)
        if key not in seen:
            seen.add(key)
            yield out


# -------------------------------------------------------------- search

_CONN_ORDER = [  # (rule, side, connective); single-premiss rules first
    ("Land", True, And), ("Ror", False, Or), ("Rimp", False, Imp), ("Rall", False, Forall),
    ("Lex", True, Exists), ("Rand", False, And), ("Lor", True, Or), ("Limp", True, Imp),
]


class _Search:
    def __init__(self, cal: Calculus, universe, deadline: float | None):
        self.cal = cal
        self.universe = frozenset(universe)
        self.deadline = deadline
        self.failed: dict[Sequent, int] = {}
        self.ticks = 0

    def tick(self):
        self.ticks += 1
        if self.deadline is not None and self.ticks % 256 == 0 and time.monotonic() > self.deadline:
            raise BudgetExhausted("search time budget exhausted")

    def terms_for(self, s: Sequent):
        extra = {Param(p) for p in free_parameters(s)}
        return sorted(self.universe | extra, key=lambda t: (term_depth(t), repr(t)))

    def leaves(self, s: Sequent) -> Iterator[Derivation]:
        for P in s.ante:
            if is_atomic(P) and P in s.succ:
                yield node(s, "Init", principal=P)
                return
        if Bot in s.ante:
            if self.cal.flavor is Flavor.M:
                if Bot in s.succ:
                    yield node(s, "InitBot")
            else:
                yield node(s, "LBot", principal=Bot)
        for sch in self.cal.extension:
            if not sch.premisses:
                for b, _ in schema_instances(sch, s, self.terms_for(s)):
                    yield node(s, sch.name, bindings=b)
                    break

    def moves(self, s: Sequent) -> Iterator[tuple[dict, list[Sequent]]]:
        fl = self.cal.flavor
        for rule, left, conn in _CONN_ORDER:
            for F in dict.fromkeys(s.ante if left else s.succ):
                if isinstance(F, conn):
                    eigen = _eigen_for(s) if rule in ("Rall", "Lex") else None
                    inst = dict(rule=rule, principal=F, eigen=eigen)
                    yield inst, logical_premisses(rule, fl, s, F, None, eigen)
        for sch in self.cal.extension:
            if sch.premisses:
                for b, ps in schema_instances(sch, s, self.terms_for(s)):
                    yield dict(rule=sch.name, bindings=b), ps
        for rule, left, conn in (("Lall", True, Forall), ("Rex", False, Exists)):
            for F in dict.fromkeys(s.ante if left else s.succ):
                if isinstance(F, conn):
                    for t in self.terms_for(s):
                        yield dict(rule=rule, principal=F, term=t), \
                            logical_premisses(rule, fl, s, F, t, None)

    def solve(self, s: Sequent, h: int, branch: set) -> tuple[Derivation | None, bool]:
        if self.failed.get(s, -1) >= h:
            return None, False
        self.tick()
        for leaf in self.leaves(s):
            return leaf, False
        if h == 0:
            self.failed[s] = max(self.failed.get(s, -1), 0)
            return None, False
        branch.add(s)
        pruned = False
        try:
            for inst, prems in self.moves(s):
                subs = []
                for p in prems:
                    if p in branch:
                        pruned = True
                        break
                    d, pr = self.solve(p, h - 1, branch)
                    pruned = pruned or pr
                    if d is None:
                        break
                    subs.append(d)
                else:
                    return node(s, premisses=subs, **inst), pruned
        finally:
            branch.discard(s)
        if not pruned:
            self.failed[s] = max(self.failed.get(s, -1), h)
        return None, pruned


def _eigen_for(s: Sequent) -> str:
    used = free_parameters(s)
    for i in itertools.count():
        if f"e{i}" not in used:
            return f"e{i}"


def _search(goal: Sequent, cal: Calculus, max_height: int, universe, deadline) -> Derivation | None:
    srch = _Search(cal, universe, deadline)
    for h in range(max_height + 1):
        d, _ = srch.solve(goal, h, set())
        if d is not None:
            v = check_derivation(d, cal)
            if v is not None:
                raise AssertionError(f"search produced an invalid derivation: {v}")
            return d
    return None


def prove_bounded(goal: Sequent, cal: Calculus, budget: SearchBudget) -> Derivation | None:
    """Derivation of ``goal`` of least height at most ``budget.max_height``, or None.

    Raises BudgetExhausted when the time budget runs out first.
    """
    universe = term_universe(goal, budget.max_term_depth)
    deadline = time.monotonic() + budget.time_ms / 1000
    return _search(goal, cal, budget.max_height, universe, deadline)


def refute_below_height(goal: Sequent, cal: Calculus, h: int, term_universe_=None,
                        time_ms: int | None = None, limit: int = MAX_UNIVERSE) -> Refutation:
    """Decide whether ``goal`` has a derivation of height <= ``h`` over a finite term universe.

    Without an explicit universe, the closed subterms of the goal are used.
    """
    if term_universe_ is None:
        depth = max((term_depth(t) for t in subterms(goal)), default=0)
        term_universe_ = term_universe(goal, depth, limit)
    universe = frozenset(term_universe_)
    if len(universe) > limit:
        raise UniverseTooLarge(f"term universe has {len(universe)} terms (limit {limit})")
    deadline = None if time_ms is None else time.monotonic() + time_ms / 1000
    d = _search(goal, cal, h, universe, deadline)
    if d is None:
        return Refutation("exhaustive-no", None, h)
    return Refutation("witness", d, height(d))


def random_derivation(seed: int, cal: Calculus, size: int, separated: bool = False) -> Derivation:
    """Checker-valid random derivation; see :func:`g3kernel.generate.random_derivation`."""
    from .generate import random_derivation as gen  # generate depends on the matcher here
    return gen(seed, cal, size, separated)
