"""Reading and writing derivation files and schema files; ASCII rendering.

A derivation file::

    #calculus c extension=eq admitted=cut,cutcs
    (rule Repl :concl "a=f(a), a=f(a) => a=f(f(a))" :inst ?P="x. a=f(x)" ?r="f(a)" ?s="a"
      (rule Init :concl "a=f(a), a=f(a), a=f(f(a)) => a=f(f(a))" :inst principal="a=f(f(a))"))

A schema file holds records such as::

    (schema Sym (premiss "?t = ?s, ?s = ?t =>") (conclusion "?s = ?t =>"))
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .calculus import (
    ADMITTED_NAMES, AtomicRuleSchema, Calculus, Derivation, Flavor, Hole,
    builtin_equality_extension, node,
)
from .syntax import (
    SyntaxErrorAt, parse_formula, parse_hole, parse_pattern_sequent, parse_sequent,
    parse_term, render_formula, render_hole, render_sequent, render_term,
)


class ProofFileError(ValueError):
    pass


@dataclass(frozen=True)
class ProofFile:
    derivation: Derivation
    calculus: Calculus
    extension_ref: str = "none"


# ------------------------------------------------------------ tokens

_TOK = re.compile(r'\s*(?:(\()|(\))|"((?:[^"\\]|\\.)*)"|([^\s()"]+))')


@dataclass
class _Tok:
    kind: str  # "(", ")", "str", "sym"
    text: str
    line: int
    col: int


def _tokens(text: str, line0: int = 1) -> list[_Tok]:
    out = []
    for lineno, line in enumerate(text.splitlines(), line0):
        if line.lstrip().startswith(("#", ";")):
            continue
        pos = 0
        while pos < len(line):
            m = _TOK.match(line, pos)
            if not m or m.end() == pos:
                if line[pos:].strip() == "":
                    break
                raise ProofFileError(f"{lineno}:{pos + 1}: unexpected character {line[pos]!r}")
            col = m.start() + len(m.group(0)) - len(m.group(0).lstrip()) + 1
            if m.group(1):
                out.append(_Tok("(", "(", lineno, col))
            elif m.group(2):
                out.append(_Tok(")", ")", lineno, col))
            elif m.group(3) is not None:
                s = re.sub(r"\\(.)", r"\1", m.group(3))
                out.append(_Tok("str", s, lineno, col))
            else:
                out.append(_Tok("sym", m.group(4), lineno, col))
            pos = m.end()
    return out


class _Reader:
    def __init__(self, toks: list[_Tok]):
        self.toks = toks
        self.i = 0

    def peek(self) -> _Tok | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self, kind: str | None = None, text: str | None = None) -> _Tok:
        t = self.peek()
        if t is None:
            raise ProofFileError("unexpected end of input")
        if (kind and t.kind != kind) or (text and t.text != text):
            want = text or kind
            raise ProofFileError(f"{t.line}:{t.col}: expected {want}, found {t.text!r}")
        self.i += 1
        return t


def _err(t: _Tok, msg: str) -> ProofFileError:
    return ProofFileError(f"{t.line}:{t.col}: {msg}")


# ---------------------------------------------------------- schemas

def parse_schemas(text: str) -> tuple[AtomicRuleSchema, ...]:
    r = _Reader(_tokens(text))
    out = []
    while r.peek() is not None:
        r.next("(")
        r.next("sym", "schema")
        name = r.next("sym").text
        prem, concl = [], None
        while r.peek() is not None and r.peek().kind == "(":
            r.next("(")
            head = r.next("sym")
            body = r.next("str")
            try:
                s = parse_pattern_sequent(body.text)
            except SyntaxErrorAt as e:
                raise _err(body, f"bad pattern: {e}") from None
            if head.text == "premiss":
                prem.append(s)
            elif head.text == "conclusion":
                concl = s
            else:
                raise _err(head, f"expected premiss or conclusion, found {head.text!r}")
            r.next(")")
        r.next(")")
        if concl is None:
            raise ProofFileError(f"schema {name} has no conclusion")
        out.append(AtomicRuleSchema(name, tuple(prem), concl))
    return tuple(out)


def render_schemas(schemas) -> str:
    lines = []
    for s in schemas:
        parts = [f"(schema {s.name}"]
        parts += [f'  (premiss "{_pattern(p)}")' for p in s.premisses]
        parts.append(f'  (conclusion "{_pattern(s.conclusion)}"))')
        lines.append("\n".join(parts))
    return "\n".join(lines) + "\n"


def _pattern(s) -> str:
    return render_sequent(s)


def load_extension(ref: str, base: Path | None = None) -> tuple[AtomicRuleSchema, ...]:
    if ref == "eq":
        return builtin_equality_extension()
    if ref == "none":
        return ()
    path = Path(ref)
    if base is not None and not path.is_absolute():
        path = base / path
    try:
        text = path.read_text()
    except OSError as e:
        raise ProofFileError(f"cannot read schema file {ref}: {e.strerror}") from None
    return parse_schemas(text)


# ------------------------------------------------------ derivations

def parse_header(line: str) -> tuple[Flavor, str, frozenset[str]]:
    words = line.split()
    if not words or words[0] != "#calculus" or len(words) < 2:
        raise ProofFileError("first line must be '#calculus m|i|c ...'")
    try:
        flavor = Flavor(words[1])
    except ValueError:
        raise ProofFileError(f"unknown flavor {words[1]!r}") from None
    ext, admitted = "none", frozenset()
    for w in words[2:]:
        key, _, val = w.partition("=")
        if key == "extension":
            ext = val or "none"
        elif key == "admitted":
            names = [v for v in val.split(",") if v]
            bad = [n for n in names if n.lower() not in ADMITTED_NAMES]
            if bad:
                raise ProofFileError(f"unknown admitted rules {bad}")
            admitted = frozenset(ADMITTED_NAMES[n.lower()] for n in names)
        else:
            raise ProofFileError(f"unknown header field {key!r}")
    return flavor, ext, admitted


def loads(text: str, base: Path | None = None) -> ProofFile:
    lines = text.splitlines()
    i = next((k for k, l in enumerate(lines) if l.strip()), None)
    if i is None:
        raise ProofFileError("empty derivation file")
    flavor, ext, admitted = parse_header(lines[i].strip())
    cal = Calculus(flavor, load_extension(ext, base), admitted)
    r = _Reader(_tokens("\n".join(lines[i + 1:]), i + 2))
    arities: dict = {}
    d = _read_node(r, arities)
    if r.peek() is not None:
        raise _err(r.peek(), "trailing input after the derivation")
    return ProofFile(d, cal, ext)


def load(path: str | Path) -> ProofFile:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise ProofFileError(f"cannot read {path}: {e.strerror}") from None
    return loads(text, p.parent)


def _read_node(r: _Reader, arities: dict) -> Derivation:
    r.next("(")
    r.next("sym", "rule")
    rule = r.next("sym").text
    r.next("sym", ":concl")
    ct = r.next("str")
    concl = _parse(parse_sequent, ct, arities)
    principal = term = eigen = None
    bindings = {}
    t = r.peek()
    if t is not None and t.kind == "sym" and t.text == ":inst":
        r.next()
        while (t := r.peek()) is not None and t.kind == "sym":
            r.next()
            if not t.text.endswith("="):
                raise _err(t, f"expected key=\"value\", found {t.text!r}")
            key = t.text[:-1]
            v = r.next("str")
            if key in ("principal", "cut"):
                principal = _parse(parse_formula, v, arities)
            elif key == "term":
                term = _parse(lambda s, a: parse_term(s), v, arities)
            elif key == "eigen":
                eigen = v.text
            elif key.startswith("?"):
                if "." in v.text:
                    var, body = _parse(lambda s, a: parse_hole(s), v, arities)
                    bindings[key[1:]] = Hole(var, body)
                else:
                    bindings[key[1:]] = _parse(lambda s, a: parse_term(s), v, arities)
            else:
                raise _err(t, f"unknown instantiation key {key!r}")
    prem = []
    while r.peek() is not None and r.peek().kind == "(":
        prem.append(_read_node(r, arities))
    r.next(")")
    return node(concl, rule, prem, principal=principal, term=term, eigen=eigen,
                bindings=bindings)


def _parse(fn, tok: _Tok, arities):
    try:
        return fn(tok.text, arities)
    except (SyntaxErrorAt, ValueError) as e:
        raise _err(tok, f"in {tok.text!r}: {e}") from None


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def header(cal: Calculus, extension_ref: str | None = None) -> str:
    if extension_ref is None:
        if not cal.extension:
            extension_ref = "none"
        elif set(cal.extension) == set(builtin_equality_extension()):
            extension_ref = "eq"
        else:
            raise ProofFileError("a custom extension needs a schema file reference")
    back = {v: k for k, v in ADMITTED_NAMES.items()}
    adm = ",".join(sorted(back[a] for a in cal.admitted))
    return f"#calculus {cal.flavor.value} extension={extension_ref} admitted={adm}"


def dumps(d: Derivation, cal: Calculus, extension_ref: str | None = None) -> str:
    out = [header(cal, extension_ref)]
    _write_node(d, 0, out)
    return "\n".join(out) + "\n"


def dump(path: str | Path, d: Derivation, cal: Calculus, extension_ref: str | None = None):
    Path(path).write_text(dumps(d, cal, extension_ref))


def _inst_items(d: Derivation) -> list[str]:
    items = []
    if d.principal is not None:
        key = "cut" if d.rule in ("Cut", "Cutcs") else "principal"
        items.append(f"{key}={_q(render_formula(d.principal))}")
    if d.term is not None:
        items.append(f"term={_q(render_term(d.term))}")
    if d.eigen is not None:
        items.append(f"eigen={_q(d.eigen)}")
    for k, v in d.bindings:
        val = render_hole(v.var, v.body) if isinstance(v, Hole) else render_term(v)
        items.append(f"?{k}={_q(val)}")
    return items


def _write_node(d: Derivation, depth: int, out: list[str]):
    pad = "  " * depth
    line = f"{pad}(rule {d.rule} :concl {_q(render_sequent(d.conclusion))}"
    items = _inst_items(d)
    if items:
        line += " :inst " + " ".join(items)
    if not d.premisses:
        out.append(line + ")")
        return
    out.append(line)
    for p in d.premisses:
        _write_node(p, depth + 1, out)
    out[-1] += ")"


# -------------------------------------------------------- rendering

def _label(d: Derivation) -> str:
    items = _inst_items(d)
    return d.rule + (" " + " ".join(i.replace('"', "") for i in items) if items else "")


def render_text(d: Derivation) -> str:
    """Indented outline, conclusion first."""
    lines = []

    def go(n: Derivation, depth: int):
        lines.append(f"{'  ' * depth}{render_sequent(n.conclusion)}   [{_label(n)}]")
        for p in n.premisses:
            go(p, depth + 1)

    go(d, 0)
    return "\n".join(lines) + "\n"


def render_tree(d: Derivation) -> str:
    """Proof tree with premisses above an inference line labelled by the rule."""
    lines, _ = _box(d)
    return "\n".join(l.rstrip() for l in lines) + "\n"


def _box(d: Derivation) -> tuple[list[str], int]:
    concl = render_sequent(d.conclusion)
    label = " " + d.rule
    if d.premisses:
        boxes = [_box(p) for p in d.premisses]
        h = max(len(b[0]) for b in boxes)
        rows = []
        for k in range(h):
            parts = []
            for lines, w in boxes:
                off = h - len(lines)
                parts.append(lines[k - off].ljust(w) if k >= off else " " * w)
            rows.append("   ".join(parts))
        above = sum(w for _, w in boxes) + 3 * (len(boxes) - 1)
    else:
        rows, above = [], 0
    w = max(len(concl), above)
    body = [(" " * ((w - above) // 2)) + row for row in rows]
    body.append("-" * w + label)
    body.append(" " * ((w - len(concl)) // 2) + concl)
    width = w + len(label)
    return [l.ljust(width) for l in body], width
