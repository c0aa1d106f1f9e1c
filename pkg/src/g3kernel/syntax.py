"""First-order terms, formulas and sequents.

Bound variables (``Var``) and free parameters (``Param``) are separate
syntactic categories.  Substitution only ever inserts closed terms, so
variable capture cannot happen.

Text syntax::

    P, a=f(a), forall x. R(x) -> Q => exists y. R(y) | _|_

Uppercase identifiers are predicates, lowercase identifiers are parameters
or function symbols.  ``&`` binds tighter than ``|`` which binds tighter
than ``->`` (right associative); a quantifier body extends as far to the
right as possible.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Union


class SyntaxErrorAt(ValueError):
    """Parse failure with a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line else ""
        super().__init__(where + message)


class ArityError(ValueError):
    pass


class SubstitutionError(ValueError):
    pass


# ---------------------------------------------------------------- terms

def _cached_hash(self) -> int:
    # terms and formulas are hashed constantly (multisets, caches); memoise
    h = self._h
    if h is None:
        h = hash((type(self).__name__, *(getattr(self, f) for f in self.__match_args__)))
        object.__setattr__(self, "_h", h)
    return h


def _hash_slot():
    return field(default=None, init=False, repr=False, compare=False)

@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class Param:
    name: str


@dataclass(frozen=True, slots=True)
class Fun:
    symbol: str
    args: tuple["Term", ...]
    _h: int | None = _hash_slot()
    __hash__ = _cached_hash


@dataclass(frozen=True, slots=True)
class Meta:
    """Term metavariable of a rule pattern (``?t``)."""

    name: str


Term = Union[Var, Param, Fun, Meta]


# ------------------------------------------------------------- formulas

@dataclass(frozen=True, slots=True)
class Atom:
    pred: str
    args: tuple[Term, ...] = ()
    _h: int | None = _hash_slot()
    __hash__ = _cached_hash


@dataclass(frozen=True, slots=True)
class Eq:
    lhs: Term
    rhs: Term
    _h: int | None = _hash_slot()
    __hash__ = _cached_hash


@dataclass(frozen=True, slots=True)
class BotType:
    pass


Bot = BotType()


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"
    _h: int | None = _hash_slot()
    __hash__ = _cached_hash


@dataclass(frozen=True, slots=True)
class Or:
    left: "Formula"
    right: "Formula"
    _h: int | None = _hash_slot()
    __hash__ = _cached_hash


@dataclass(frozen=True, slots=True)
class Imp:
    left: "Formula"
    right: "Formula"
    _h: int | None = _hash_slot()
    __hash__ = _cached_hash


@dataclass(frozen=True, slots=True)
class Forall:
    var: str
    body: "Formula"
    _h: int | None = _hash_slot()
    __hash__ = _cached_hash


@dataclass(frozen=True, slots=True)
class Exists:
    var: str
    body: "Formula"
    _h: int | None = _hash_slot()
    __hash__ = _cached_hash


@dataclass(frozen=True, slots=True)
class HoleAtom:
    """Pattern ``?P[t]``: an atom metavariable with its hole filled by ``t``."""

    name: str
    arg: Term


Formula = Union[Atom, Eq, BotType, And, Or, Imp, Forall, Exists, HoleAtom]

BINARY = (And, Or, Imp)
QUANTIFIERS = (Forall, Exists)


def is_atomic(f: Formula) -> bool:
    """Atoms and equations; ``_|_`` is handled per flavor by the calculus."""
    return isinstance(f, (Atom, Eq))


def formula_height(f: Formula) -> int:
    """Height of the formation tree (atoms and ``_|_`` have height 0)."""
    if isinstance(f, BINARY):
        return 1 + max(formula_height(f.left), formula_height(f.right))
    if isinstance(f, QUANTIFIERS):
        return 1 + formula_height(f.body)
    return 0


# ------------------------------------------------------------- sequents

@dataclass(frozen=True, slots=True)
class Sequent:
    """A pair of finite multisets, stored sorted so equality is structural."""

    ante: tuple[Formula, ...] = ()
    succ: tuple[Formula, ...] = ()
    _h: int | None = _hash_slot()
    __hash__ = _cached_hash

    @classmethod
    def of(cls, ante: Iterable[Formula] = (), succ: Iterable[Formula] = ()) -> "Sequent":
        return cls(_canon(ante), _canon(succ))

    def add(self, left: Iterable[Formula] = (), right: Iterable[Formula] = ()) -> "Sequent":
        return Sequent.of((*self.ante, *left), (*self.succ, *right))

    def remove(self, left: Iterable[Formula] = (), right: Iterable[Formula] = ()) -> "Sequent":
        """Remove one occurrence per listed formula; KeyError if absent."""
        return Sequent(_canon_tuple(_msub(self.ante, left)), _canon_tuple(_msub(self.succ, right)))

    def contains(self, left: Iterable[Formula] = (), right: Iterable[Formula] = ()) -> bool:
        return _mle(left, self.ante) and _mle(right, self.succ)

    def issubsequent(self, other: "Sequent") -> bool:
        return _mle(self.ante, other.ante) and _mle(self.succ, other.succ)

    def minus(self, other: "Sequent") -> "Sequent":
        """Multiset difference, truncated at zero."""
        return Sequent.of(
            (Counter(self.ante) - Counter(other.ante)).elements(),
            (Counter(self.succ) - Counter(other.succ)).elements(),
        )

    def lub(self, other: "Sequent") -> "Sequent":
        """Smallest sequent containing both (pointwise max multiplicity)."""
        return Sequent.of(
            (Counter(self.ante) | Counter(other.ante)).elements(),
            (Counter(self.succ) | Counter(other.succ)).elements(),
        )

    def formulas(self) -> Iterator[Formula]:
        yield from self.ante
        yield from self.succ

    def __str__(self) -> str:
        return render_sequent(self)


def _canon(fs: Iterable[Formula]) -> tuple[Formula, ...]:
    return _canon_tuple(list(fs))


def _canon_tuple(fs) -> tuple[Formula, ...]:
    return tuple(sorted(fs, key=render_formula))


def _msub(base, gone) -> list:
    out = list(base)
    for f in gone:
        out.remove(f)
    return out


def _mle(small, big) -> bool:
    need = Counter(small)
    have = Counter(big)
    return all(have[f] >= n for f, n in need.items())


def count(fs: Iterable[Formula], f: Formula) -> int:
    return sum(1 for g in fs if g == f)


# -------------------------------------------------------- substitution

def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Fun):
        return set().union(*(term_vars(a) for a in t.args)) if t.args else set()
    return set()


def subst_term(t: Term, mapping: dict) -> Term:
    """Simultaneous replacement of Var/Param/Meta leaves keyed by the leaf itself."""
    if isinstance(t, Fun):
        return Fun(t.symbol, tuple(subst_term(a, mapping) for a in t.args))
    return mapping.get(t, t)


def _subst(f: Formula, mapping: dict) -> Formula:
    if not mapping:
        return f
    match f:
        case Atom(p, args):
            return Atom(p, tuple(subst_term(a, mapping) for a in args))
        case Eq(l, r):
            return Eq(subst_term(l, mapping), subst_term(r, mapping))
        case And(a, b):
            return And(_subst(a, mapping), _subst(b, mapping))
        case Or(a, b):
            return Or(_subst(a, mapping), _subst(b, mapping))
        case Imp(a, b):
            return Imp(_subst(a, mapping), _subst(b, mapping))
        case Forall(x, body) | Exists(x, body):
            inner = {k: v for k, v in mapping.items() if k != Var(x)}
            return type(f)(x, _subst(body, inner))
        case HoleAtom(n, arg):
            return HoleAtom(n, subst_term(arg, mapping))
    return f


def substitute_formula(f: Formula, x: str, t: Term) -> Formula:
    """``f[x/t]``: replace free occurrences of bound variable ``x`` by ``t``."""
    if term_vars(t):
        raise SubstitutionError(f"term {render_term(t)} contains bound variables")
    return _subst(f, {Var(x): t})


def substitute_many(f: Formula, mapping: dict[str, Term]) -> Formula:
    """Simultaneous ``f[x1/t1, ..., xn/tn]`` over bound variables."""
    for t in mapping.values():
        if term_vars(t):
            raise SubstitutionError(f"term {render_term(t)} contains bound variables")
    return _subst(f, {Var(x): t for x, t in mapping.items()})


def replace_param(f: Formula, a: str, t: Term) -> Formula:
    """``f[a/t]`` for a parameter ``a``."""
    return _subst(f, {Param(a): t})


def replace_param_sequent(s: Sequent, a: str, t: Term) -> Sequent:
    return Sequent.of((replace_param(f, a, t) for f in s.ante),
                      (replace_param(f, a, t) for f in s.succ))


def free_parameters(obj) -> set[str]:
    """Parameters occurring in a term, formula, sequent or iterable of those."""
    match obj:
        case Param(n):
            return {n}
        case Var() | Meta() | BotType():
            return set()
        case Fun(_, args) | Atom(_, args):
            return set().union(*map(free_parameters, args)) if args else set()
        case Eq(l, r):
            return free_parameters(l) | free_parameters(r)
        case And(a, b) | Or(a, b) | Imp(a, b):
            return free_parameters(a) | free_parameters(b)
        case Forall(_, body) | Exists(_, body):
            return free_parameters(body)
        case HoleAtom(_, arg):
            return free_parameters(arg)
        case Sequent():
            return free_parameters(obj.formulas())
    out: set[str] = set()
    for o in obj:
        out |= free_parameters(o)
    return out


def free_vars(f: Formula) -> set[str]:
    match f:
        case Atom(_, args):
            return set().union(*map(term_vars, args)) if args else set()
        case Eq(l, r):
            return term_vars(l) | term_vars(r)
        case And(a, b) | Or(a, b) | Imp(a, b):
            return free_vars(a) | free_vars(b)
        case Forall(x, body) | Exists(x, body):
            return free_vars(body) - {x}
        case HoleAtom(_, arg):
            return term_vars(arg)
    return set()


def subterms(obj) -> set[Term]:
    """Closed subterms occurring in a term, formula or sequent."""
    out: set[Term] = set()

    def walk_t(t):
        if isinstance(t, (Param, Fun)) and not term_vars(t):
            out.add(t)
        if isinstance(t, Fun):
            for a in t.args:
                walk_t(a)

    def walk(f):
        match f:
            case Atom(_, args):
                for a in args:
                    walk_t(a)
            case Eq(l, r):
                walk_t(l)
                walk_t(r)
            case And(a, b) | Or(a, b) | Imp(a, b):
                walk(a)
                walk(b)
            case Forall(_, body) | Exists(_, body):
                walk(body)

    if isinstance(obj, Sequent):
        for f in obj.formulas():
            walk(f)
    elif isinstance(obj, (Var, Param, Fun)):
        walk_t(obj)
    else:
        walk(obj)
    return out


def function_symbols(obj) -> dict[str, int]:
    """Function symbol arities occurring in a sequent or formula."""
    out: dict[str, int] = {}

    def walk_t(t):
        if isinstance(t, Fun):
            out[t.symbol] = len(t.args)
            for a in t.args:
                walk_t(a)

    formulas = obj.formulas() if isinstance(obj, Sequent) else [obj]
    stack = list(formulas)
    while stack:
        f = stack.pop()
        match f:
            case Atom(_, args):
                for a in args:
                    walk_t(a)
            case Eq(l, r):
                walk_t(l)
                walk_t(r)
            case And(a, b) | Or(a, b) | Imp(a, b):
                stack += [a, b]
            case Forall(_, body) | Exists(_, body):
                stack.append(body)
    return out


def term_depth(t: Term) -> int:
    if isinstance(t, Fun) and t.args:
        return 1 + max(term_depth(a) for a in t.args)
    return 0


# ------------------------------------------------------------ rendering

def render_term(t: Term) -> str:
    match t:
        case Var(n) | Param(n):
            return n
        case Meta(n):
            return "?" + n
        case Fun(s, args):
            return f"{s}({','.join(render_term(a) for a in args)})"
    raise TypeError(t)


@lru_cache(maxsize=1 << 16)
def render_formula(f: Formula) -> str:
    match f:
        case Atom(p, ()):
            return p
        case Atom(p, args):
            return f"{p}({','.join(render_term(a) for a in args)})"
        case Eq(l, r):
            return f"{render_term(l)}={render_term(r)}"
        case BotType():
            return "_|_"
        case HoleAtom(n, arg):
            return f"?{n}[{render_term(arg)}]"
        case Forall(x, body):
            return f"forall {x}. {render_formula(body)}"
        case Exists(x, body):
            return f"exists {x}. {render_formula(body)}"
        case And(a, b):
            return f"{_wrap(a)} & {_wrap(b)}"
        case Or(a, b):
            return f"{_wrap(a)} | {_wrap(b)}"
        case Imp(a, b):
            return f"{_wrap(a)} -> {_wrap(b)}"
    raise TypeError(f)


def _wrap(f: Formula) -> str:
    s = render_formula(f)
    return f"({s})" if isinstance(f, BINARY + QUANTIFIERS) else s


def render_sequent(s: Sequent) -> str:
    left = ", ".join(render_formula(f) for f in s.ante)
    right = ", ".join(render_formula(f) for f in s.succ)
    return " ".join(p for p in (left, "=>", right) if p)


# -------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"""(?P<ws>[ \t\r\n]+|\#[^\n]*)
      | (?P<bot>_\|_)
      | (?P<turn>=>)
      | (?P<imp>->)
      | (?P<meta>\?[A-Za-z_][A-Za-z0-9_']*)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
      | (?P<punct>[(),.&|=\[\]])
    """,
    re.VERBOSE,
)


def _tokenize(text: str):
    pos, line, col = 0, 1, 1
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise SyntaxErrorAt(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind != "ws":
            if kind in ("bot", "turn", "imp", "punct"):
                kind = value
            out.append((kind, value, line, col))
        for ch in value:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        pos = m.end()
    out.append(("eof", "", line, col))
    return out


class _Parser:
    def __init__(self, text: str, patterns: bool = False, bound: Iterable[str] = (),
                 arities: dict | None = None):
        self.toks = _tokenize(text)
        self.i = 0
        self.patterns = patterns
        self.bound = list(bound)
        self.arities = {} if arities is None else arities

    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg: str, tok=None):
        tok = tok or self.peek()
        return SyntaxErrorAt(msg, tok[2], tok[3])

    def expect(self, kind: str):
        tok = self.next()
        if tok[0] != kind:
            raise self.error(f"expected {kind!r}, found {tok[1] or 'end of input'!r}", tok)
        return tok

    def at(self, kind: str) -> bool:
        return self.peek()[0] == kind

    def at_keyword(self, word: str) -> bool:
        return self.peek()[0] == "ident" and self.peek()[1] == word

    def end(self):
        if not self.at("eof"):
            raise self.error(f"unexpected {self.peek()[1]!r}")

    def sequent(self) -> Sequent:
        left = [] if self.at("=>") else self.formula_list()
        self.expect("=>")
        right = [] if self.at("eof") else self.formula_list()
        self.end()
        return Sequent.of(left, right)

    def formula_list(self) -> list[Formula]:
        out = [self.formula()]
        while self.at(","):
            self.next()
            out.append(self.formula())
        return out

    def formula(self) -> Formula:
        if self.at_keyword("forall") or self.at_keyword("exists"):
            return self.quantified()
        left = self.disjunction()
        if self.at("->"):
            self.next()
            return Imp(left, self.formula())
        return left

    def quantified(self) -> Formula:
        kw = self.next()[1]
        tok = self.expect("ident")
        name = tok[1]
        if name[0].isupper() or name in ("forall", "exists"):
            raise self.error(f"bad bound variable {name!r}", tok)
        self.expect(".")
        self.bound.append(name)
        try:
            body = self.formula()
        finally:
            self.bound.pop()
        return (Forall if kw == "forall" else Exists)(name, body)

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.at("|"):
            self.next()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.at("&"):
            self.next()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok[0] == "_|_":
            self.next()
            return Bot
        if tok[0] == "(":
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        if self.at_keyword("forall") or self.at_keyword("exists"):
            return self.quantified()
        if tok[0] == "meta" and self.patterns and self.peek(1)[0] == "[":
            self.next()
            self.next()
            arg = self.term()
            self.expect("]")
            return HoleAtom(tok[1][1:], arg)
        if tok[0] == "ident" and tok[1][0].isupper():
            self.next()
            args = self.args() if self.at("(") else ()
            self._arity("predicate " + tok[1], len(args), tok)
            return Atom(tok[1], args)
        lhs = self.term()
        self.expect("=")
        return Eq(lhs, self.term())

    def args(self) -> tuple[Term, ...]:
        self.expect("(")
        out = [self.term()]
        while self.at(","):
            self.next()
            out.append(self.term())
        self.expect(")")
        return tuple(out)

    def term(self) -> Term:
        tok = self.next()
        if tok[0] == "meta":
            if not self.patterns:
                raise self.error("metavariables are only allowed in rule patterns", tok)
            return Meta(tok[1][1:])
        if tok[0] != "ident" or tok[1][0].isupper() or tok[1] in ("forall", "exists"):
            raise self.error(f"expected a term, found {tok[1] or 'end of input'!r}", tok)
        name = tok[1]
        if self.at("("):
            args = self.args()
            self._arity("function " + name, len(args), tok)
            return Fun(name, args)
        if name in self.bound:
            return Var(name)
        return Param(name)

    def _arity(self, key: str, n: int, tok):
        seen = self.arities.setdefault(key, n)
        if seen != n:
            raise ArityError(f"{tok[2]}:{tok[3]}: {key} used with arity {n} and {seen}")


def parse_sequent(text: str, arities: dict | None = None) -> Sequent:
    """Parse ``"A, B => C"``.  Pass a shared ``arities`` dict to check a whole problem."""
    return _Parser(text, arities=arities).sequent()


def parse_formula(text: str, arities: dict | None = None) -> Formula:
    p = _Parser(text, arities=arities)
    f = p.formula()
    p.end()
    return f


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    p.end()
    return t


def parse_hole(text: str) -> tuple[str, Formula]:
    """Parse an atom with a hole, written ``"x. P(f(x))"``."""
    p = _Parser(text)
    tok = p.expect("ident")
    p.expect(".")
    p.bound.append(tok[1])
    f = p.formula()
    p.end()
    if not is_atomic(f):
        raise SyntaxErrorAt(f"hole body must be atomic: {text!r}")
    return tok[1], f


def render_hole(var: str, body: Formula) -> str:
    return f"{var}. {render_formula(body)}"


def parse_pattern_sequent(text: str) -> Sequent:
    """Sequent of rule patterns (``?t`` term metavariables, ``?P[t]`` holes)."""
    return _Parser(text, patterns=True).sequent()
