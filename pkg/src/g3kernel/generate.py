"""Seeded random derivations, used as test data for the transformations.

Derivations are grown root-first: each call receives the formulas its
endsequent must contain and may add further "extra" formulas, which are
built from the base parameters only so they never clash with proper
parameters.  Sibling premisses that must share a context are padded with
each other's extras.  Padding is a local weakening routine, kept separate
from the library's own weakening so tests of the latter stay independent.
"""

from __future__ import annotations

import random
from dataclasses import replace

from .calculus import (
    CONNECTIVE, Calculus, Derivation, Flavor, Hole, LEFT_RULES, LOGICAL, STRUCTURAL,
    logical_premisses, node, schema_conclusion,
)
from .search import match_formula
from .syntax import (
    And, Atom, Bot, Eq, Exists, Forall, Formula, Fun, Imp, Or, Param, Sequent, Term, Var,
    free_parameters, is_atomic, subterms,
)

BASE = ("a", "b", "c")
_LOGICAL_RULES = ("Land", "Rand", "Lor", "Ror", "Limp", "Rimp", "Lall", "Rall", "Lex", "Rex")


def random_derivation(seed: int, cal: Calculus, size: int, separated: bool = False) -> Derivation:
    """Checker-valid derivation in ``cal`` with at most ``size`` nodes.

    With ``separated`` no logical rule is placed above an extension rule or a
    context-sharing cut.  The same seed always gives the same derivation.
    """
    rng = random.Random(seed)
    g = _Gen(cal, rng, separated)
    d = g.gen(max(1, size), [], [], False, False)
    if d is None:
        P = g.atom()
        d = node(Sequent.of([P], [P]), "Init", principal=P)
    return d


def _base(fs) -> bool:
    return free_parameters(fs) <= set(BASE)


def _missing(have: list, need) -> list:
    pool = list(have)
    out = []
    for f in need:
        if f in pool:
            pool.remove(f)
        else:
            out.append(f)
    return out


def _pad(d: Derivation, left, right, flavor: Flavor) -> Derivation:
    left, right = list(left), list(right)
    if not left and not right:
        return d
    concl = d.conclusion.add(left, right)
    ps = d.premisses
    r = d.rule
    if not ps:
        return replace(d, conclusion=concl)
    if flavor.intuitionistic and r in ("Rimp", "Rall"):
        ps = (_pad(ps[0], left, (), flavor),)
    elif r == "Cut":
        ps = (_pad(ps[0], left, (), flavor), _pad(ps[1], (), right, flavor))
    elif r in LOGICAL or r in STRUCTURAL:
        ps = tuple(_pad(p, left, right, flavor) for p in ps)
    else:
        ps = (_pad(ps[0], left, right, flavor),) + ps[1:]
    return replace(d, conclusion=concl, premisses=ps)


class _Gen:
    def __init__(self, cal: Calculus, rng: random.Random, separated: bool):
        self.cal = cal
        self.fl = cal.flavor
        self.rng = rng
        self.separated = separated
        self.eigens = 0
        self.calls = 0
        self.max_calls = 1000
        self.eq = any(s.name in ("Ref", "Repl") for s in cal.extension)

    # ---------------------------------------------------------- syntax
    def term(self, depth: int = 1, bound=()) -> Term:
        r = self.rng
        if bound and r.random() < 0.5:
            return Var(r.choice(bound))
        if depth > 0 and r.random() < 0.3:
            return Fun("f", (self.term(depth - 1, bound),))
        return Param(r.choice(BASE))

    def atom(self, bound=()) -> Formula:
        r = self.rng
        x = r.random()
        if x < (0.45 if self.eq else 0.1):
            return Eq(self.term(1, bound), self.term(1, bound))
        if x < 0.75:
            return Atom(r.choice("PQ"), (self.term(1, bound),))
        return Atom(r.choice("RS"))

    def formula(self, depth: int, bound=()) -> Formula:
        r = self.rng
        if depth == 0 or r.random() < 0.35:
            return Bot if r.random() < 0.08 else self.atom(bound)
        return self.compound(r.choice([And, Or, Imp, Forall, Exists]), depth, bound)

    def compound(self, conn, depth: int = 2, bound=()) -> Formula:
        if conn in (Forall, Exists):
            v = next(n for n in "xyzuvw" if n not in bound)
            return conn(v, self.formula(depth - 1, bound + (v,)))
        return conn(self.formula(depth - 1, bound), self.formula(depth - 1, bound))

    def hole_body(self) -> Formula:
        x = Var("x")
        t = self.term(0)
        return self.rng.choice([
            Atom("P", (x,)), Atom("Q", (Fun("f", (x,)),)), Eq(x, t), Eq(t, x),
            Eq(Fun("f", (x,)), t), Eq(t, Fun("f", (x,))), Atom("R"),
        ])

    def fresh_eigen(self) -> str:
        self.eigens += 1
        return f"g{self.eigens}"

    # ---------------------------------------------------------- driver
    def gen(self, k: int, ml: list, mr: list, exact: bool, free: bool) -> Derivation | None:
        self.calls += 1
        if self.calls > self.max_calls:
            return self.leaf(ml, mr, exact, free)
        r = self.rng
        moves = []
        if k >= 2:
            moves += self.internal_moves(k, free)
            r.shuffle(moves)
            moves = moves[:5]
        if not moves or r.random() < 1.5 / k:
            moves.insert(0, None)
        else:
            moves.append(None)
        for mv in moves:
            d = self.leaf(ml, mr, exact, free) if mv is None else mv(k, ml, mr, exact, free)
            if d is not None:
                return d
        return None

    def internal_moves(self, k: int, free: bool) -> list:
        out = []
        if not free:
            for rule in _LOGICAL_RULES:
                if rule in ("Rand", "Lor", "Limp") and k < 3:
                    continue
                out.append(lambda k, ml, mr, ex, fr, rule=rule:
                           self.logical(rule, k, ml, mr, ex, fr))
        for sch in self.cal.extension:
            if sch.premisses and k > len(sch.premisses):
                weight = 3 if free or self.separated else 1
                for _ in range(weight):
                    out.append(lambda k, ml, mr, ex, fr, sch=sch:
                               self.schema(sch, k, ml, mr, ex, fr))
        adm = self.cal.admitted
        if k >= 3:
            if "Cutcs" in adm:
                out.append(self.cutcs)
            if "Cut" in adm:
                out.append(self.cut)
        for rule in ("LW", "RW", "LC", "RC"):
            if rule in adm:
                out.append(lambda k, ml, mr, ex, fr, rule=rule:
                           self.struct(rule, k, ml, mr, ex, fr))
        return out

    def split(self, k: int, n: int) -> list[int]:
        # k - 1 nodes for n premisses, each at least one
        rest = k - 1 - n
        cuts = sorted(self.rng.randint(0, rest) for _ in range(n - 1))
        parts = [b - a for a, b in zip([0] + cuts, cuts + [rest])]
        return [1 + p for p in parts]

    def extend(self, ml, mr, need_l, need_r, exact):
        ml_add = _missing(ml, need_l)
        mr_add = _missing(mr, need_r)
        if not _base(ml_add + mr_add) or (exact and mr_add):
            return None
        return list(ml) + ml_add, list(mr) + mr_add

    def child_free(self, free: bool) -> bool:
        return free or self.separated

    # ------------------------------------------------------------ leaves
    def leaf(self, ml, mr, exact, free) -> Derivation | None:
        r = self.rng
        opts = []
        for P in ml:
            if is_atomic(P) and P in mr:
                opts.append((P, [], []))
        if not exact:
            opts += [(P, [], [P]) for P in ml if is_atomic(P) and _base([P])]
        opts += [(P, [P], []) for P in mr if is_atomic(P) and _base([P])]
        if not exact:
            P = self.atom()
            opts.append((P, [P], [P]))
        bot = []
        if self.fl is Flavor.M:
            add_r = [] if Bot in mr else [Bot]
            if not (exact and add_r):
                bot.append(("InitBot", [] if Bot in ml else [Bot], add_r))
        elif not free:
            bot.append(("LBot", [] if Bot in ml else [Bot], []))
        axioms = [s for s in self.cal.extension if not s.premisses]
        choice = r.random()
        if axioms and choice < 0.2:
            d = self.schema(r.choice(axioms), 1, ml, mr, exact, free)
            if d is not None:
                return d
        if bot and (choice > 0.9 or not opts):
            rule, al, ar = r.choice(bot)
            s = Sequent.of(list(ml) + al, list(mr) + ar)
            return node(s, rule, principal=Bot if rule == "LBot" else None)
        if not opts:
            return None
        P, al, ar = r.choice(opts)
        return node(Sequent.of(list(ml) + al, list(mr) + ar), "Init", principal=P)

    # ------------------------------------------------------ logical rules
    def logical(self, rule, k, ml, mr, exact, free) -> Derivation | None:
        r = self.rng
        left = rule in LEFT_RULES
        conn = CONNECTIVE[rule]
        side = ml if left else mr
        cands = [F for F in side if isinstance(F, conn)]
        ml2, mr2 = list(ml), list(mr)
        if cands and r.random() < 0.75:
            F = r.choice(cands)
        else:
            F = self.compound(conn, r.choice([1, 2, 2, 3]))
            if not left and exact:
                return None
            (ml2 if left else mr2).append(F)
        term = eigen = None
        if rule in ("Lall", "Rex"):
            pool = sorted(free_parameters(ml2 + mr2) | set(BASE))
            term = Param(r.choice(pool))
            if r.random() < 0.2:
                term = Fun("f", (term,))
        if rule in ("Rall", "Lex"):
            eigen = self.fresh_eigen()
        reqs = logical_premisses(rule, self.fl, Sequent.of(ml2, mr2), F, term, eigen)
        ex = True if (self.fl.intuitionistic and rule in ("Rimp", "Rall")) else exact
        subs = []
        for kj, req in zip(self.split(k, len(reqs)), reqs):
            d = self.gen(kj, list(req.ante), list(req.succ), ex, free)
            if d is None:
                return None
            subs.append(d)
        extras = [d.conclusion.minus(req) for d, req in zip(subs, reqs)]
        common = extras[0]
        for e in extras[1:]:
            common = common.lub(e)
        subs = [_pad(d, common.minus(e).ante, common.minus(e).succ, self.fl)
                for d, e in zip(subs, extras)]
        concl = Sequent.of(ml2, mr2).add(common.ante, common.succ)
        return node(concl, rule, subs, principal=F, term=term, eigen=eigen)

    # ---------------------------------------------------- extension rules
    def schema(self, sch, k, ml, mr, exact, free) -> Derivation | None:
        r = self.rng
        terms, holes = sch.metavariables()
        b: dict = {}
        pats = [(True, p) for p in sch.conclusion.ante] + [(False, p) for p in sch.conclusion.succ]
        if pats and r.random() < 0.7:
            left, p = r.choice(pats)
            targets = [g for g in (ml if left else mr) if is_atomic(g)]
            if targets:
                found = list(match_formula(p, r.choice(targets), {}))
                if found:
                    b = r.choice(found)
        if r.random() < 0.6:
            # draw remaining terms from the required formulas to connect with them
            pool = sorted(subterms(list(ml) + list(mr)), key=repr) or [Param("a")]
        else:
            pool = [self.term(1) for _ in range(3)]
        for t in sorted(terms - b.keys()):
            b[t] = r.choice(pool)
        for h in sorted(holes - b.keys()):
            b[h] = Hole("x", self.hole_body())
        actives, out = sch.instantiate(b)
        ext = self.extend(ml, mr, out.ante, out.succ, exact)
        if ext is None:
            return None
        ml2, mr2 = ext
        ctx = Sequent.of(ml2, mr2).remove(out.ante, out.succ)
        if not actives:
            return node(Sequent.of(ml2, mr2), sch.name, bindings=b)
        n = len(actives)
        shares = [([], []) for _ in range(n)]
        for f in ctx.ante:
            shares[r.randrange(n)][0].append(f)
        for f in ctx.succ:
            shares[r.randrange(n)][1].append(f)
        subs = []
        for kj, q, (sl, sr) in zip(self.split(k, n), actives, shares):
            d = self.gen(kj, list(q.ante) + sl, list(q.succ) + sr, exact, self.child_free(free))
            if d is None:
                return None
            subs.append(d)
        concl = schema_conclusion(sch, b, [d.conclusion for d in subs])
        return node(concl, sch.name, subs, bindings=b)

    # --------------------------------------------------- structural rules
    def cutcs(self, k, ml, mr, exact, free) -> Derivation | None:
        A = self.atom() if self.rng.random() < 0.6 else self.formula(2)
        k0, k1 = self.split(k, 2)
        cf = self.child_free(free)
        d0 = self.gen(k0, list(ml), list(mr) + [A], exact, cf)
        if d0 is None:
            return None
        d1 = self.gen(k1, list(ml) + [A], list(mr), exact, cf)
        if d1 is None:
            return None
        e0 = d0.conclusion.minus(Sequent.of(ml, list(mr) + [A]))
        e1 = d1.conclusion.minus(Sequent.of(list(ml) + [A], mr))
        common = e0.lub(e1)
        d0 = _pad(d0, common.minus(e0).ante, common.minus(e0).succ, self.fl)
        d1 = _pad(d1, common.minus(e1).ante, common.minus(e1).succ, self.fl)
        concl = Sequent.of(ml, mr).add(common.ante, common.succ)
        return node(concl, "Cutcs", [d0, d1], principal=A)

    def cut(self, k, ml, mr, exact, free) -> Derivation | None:
        r = self.rng
        A = self.atom() if r.random() < 0.5 else self.formula(2)
        k0, k1 = self.split(k, 2)
        parts = [([], []), ([], [])]
        for f in ml:
            parts[r.randrange(2)][0].append(f)
        for f in mr:
            parts[r.randrange(2)][1].append(f)
        d0 = self.gen(k0, parts[0][0], parts[0][1] + [A], exact, free)
        if d0 is None:
            return None
        d1 = self.gen(k1, parts[1][0] + [A], parts[1][1], exact, free)
        if d1 is None:
            return None
        c0 = d0.conclusion.remove(right=[A])
        c1 = d1.conclusion.remove(left=[A])
        return node(c0.add(c1.ante, c1.succ), "Cut", [d0, d1], principal=A)

    def struct(self, rule, k, ml, mr, exact, free) -> Derivation | None:
        r = self.rng
        left = rule[0] == "L"
        side = ml if left else mr
        if side and r.random() < 0.6:
            F = r.choice(side)
            new = False
        else:
            F = self.formula(2)
            new = True
            if not _base([F]) or (exact and not left):
                return None
        rest_l, rest_r = list(ml), list(mr)
        if new:
            (rest_l if left else rest_r).append(F)
        # rest_* is the required conclusion, F occurring in it
        if rule in ("LW", "RW"):
            pl, pr = list(rest_l), list(rest_r)
            (pl if left else pr).remove(F)
        else:
            pl, pr = list(rest_l), list(rest_r)
            (pl if left else pr).append(F)
        d = self.gen(k - 1, pl, pr, exact, free)
        if d is None:
            return None
        c = d.conclusion
        if rule == "LW":
            concl = c.add(left=[F])
        elif rule == "RW":
            concl = c.add(right=[F])
        elif rule == "LC":
            concl = c.remove(left=[F])
        else:
            concl = c.remove(right=[F])
        return node(concl, rule, [d], principal=F)
