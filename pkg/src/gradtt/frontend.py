"""Surface syntax: lexer, parser with named binders, pretty-printer.

A source file is a sequence of pragmas and definitions::

    %modality linear
    -- comment
    def id : Pi[0,0] (A : U) -> Pi[1,0] (x : A) -> A := \\[0] A. \\[1] x. x

Definitions may mention earlier definitions; each use is replaced by the
earlier body wrapped in an ascription with its declared type, so the
resulting terms are closed and self-contained.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .grades import Modality, ModalityError, make_instance
from .syntax import (STRONG, WEAK, Ann, App, Empty, Emptyrec, Fst, Lam, Nat, Natrec, Node, Pair,
                     Pi, Prodrec, Sigma, Snd, Star, Suc, Term, U, Unit, Unitrec, Var, Zero)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int, source: str = "<input>"):
        super().__init__(f"{source}:{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col
        self.source = source


@dataclass(frozen=True)
class Span:
    line: int
    col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


# ---------------------------------------------------------------------------
# Lexing

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>--[^\n]*)
  | (?P<pragma>%[A-Za-z][A-Za-z0-9_\-]*)
  | (?P<kw>Unit[&@]|Sig[&@]|star[&@]|,[&@])
  | (?P<sym>:=|->|\*\*|\\|\.|\(|\)|\[|\]|,|:|@|λ)
  | (?P<grade>1\?|ω)
  | (?P<num>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)

KEYWORDS = {"def", "U", "Nat", "Empty", "zero", "suc", "fst", "snd", "prodrec", "natrec",
            "emptyrec", "unitrec", "Pi"}


@dataclass(frozen=True)
class Token:
    kind: str  # kw, sym, grade, num, ident, pragma, eof
    text: str
    line: int
    col: int

    @property
    def end_col(self) -> int:
        return self.col + len(self.text)


def tokenize(text: str, source: str = "<input>") -> list[Token]:
    toks: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        mt = _TOKEN_RE.match(text, pos)
        if mt is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1, source)
        kind = mt.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = mt.end()
        elif kind == "pragma":
            # a pragma runs to the end of its line
            end = text.find("\n", pos)
            end = len(text) if end < 0 else end
            body = text[pos:end].split("--", 1)[0].rstrip()
            toks.append(Token("pragma", body, line, col))
            pos = end
            continue
        elif kind not in ("ws", "comment"):
            if kind == "ident" and mt.group() in KEYWORDS:
                kind = "kw"
            toks.append(Token(kind, mt.group(), line, col))
        pos = mt.end()
    toks.append(Token("eof", "", line, pos - line_start + 1))
    return toks


# ---------------------------------------------------------------------------
# Files


@dataclass(frozen=True)
class Definition:
    name: str
    type: Term
    body: Term
    span: Span


@dataclass
class SourceFile:
    definitions: list[Definition]
    pragmas: dict[str, str]
    modality: Modality
    source: str = "<input>"
    spans: dict[int, Span] = field(default_factory=dict, repr=False)
    binders: dict[int, str] = field(default_factory=dict, repr=False)
    _keep: list = field(default_factory=list, repr=False)  # keeps span keys alive

    def names(self) -> list[str]:
        return [d.name for d in self.definitions]

    def get(self, name: str) -> Definition:
        for d in self.definitions:
            if d.name == name:
                return d
        raise KeyError(f"no definition named {name!r} in {self.source}; available: {', '.join(self.names()) or 'none'}")

    def span_of(self, root: Term, path: Sequence[str]) -> Span | None:
        """Source span of the subterm of ``root`` reached by ``path`` (or its nearest ancestor)."""
        best = self.spans.get(id(root))
        node: Node = root
        for step in path:
            if not hasattr(node, step):
                break
            node = getattr(node, step)
            best = self.spans.get(id(node), best)
        return best

    def binder_name(self, lam: Term, default: str) -> str:
        """The source name of a λ's bound variable (``default`` for synthesised terms)."""
        return self.binders.get(id(lam), default)


def resolve(file: SourceFile, name: str) -> Term:
    """The closed body of definition ``name`` (earlier definitions are already inlined)."""
    return file.get(name).body


PRAGMAS = {"%modality": 1, "%nr": 1, "%mode": 1, "%no-erased-matches": 0, "%no-emptyrec-zero": 0,
           "%pisigma": 1, "%strict": 0}


def parse(text: str, modality: Modality | str | None = None, source: str = "<input>") -> SourceFile:
    toks = tokenize(text, source)
    pragmas: dict[str, str] = {}
    for t in toks:
        if t.kind == "pragma":
            word, *args = t.text.split()
            if word not in PRAGMAS:
                raise ParseError(f"unknown pragma {word}", t.line, t.col, source)
            if len(args) != PRAGMAS[word]:
                raise ParseError(f"pragma {word} takes {PRAGMAS[word]} argument(s)", t.line, t.col, source)
            pragmas[word[1:]] = args[0] if args else "on"
    if modality is None:
        modality = pragmas.get("modality", "erasure")
    if isinstance(modality, str):
        try:
            if pragmas.get("nr") == "bad" and modality == "linear":
                modality = "linear-bad-nr"
            modality = make_instance(modality)
        except ModalityError as e:
            raise ParseError(str(e), 1, 1, source) from None
    p = _Parser([t for t in toks if t.kind != "pragma"], modality, source)
    defs = p.file()
    return SourceFile(defs, pragmas, modality, source, p.spans, p.binders, p.keep)


def parse_term(text: str, modality: Modality | str = "erasure", names: Sequence[str] = (),
               defs: dict[str, Term] | None = None) -> Term:
    """Parse a single term; ``names`` lists free variables, outermost first."""
    m = make_instance(modality) if isinstance(modality, str) else modality
    p = _Parser([t for t in tokenize(text) if t.kind != "pragma"], m, "<input>")
    p.globals = dict(defs or {})
    t = p.expr(list(names))
    p.expect_kind("eof")
    return t


class _Parser:
    def __init__(self, toks: list[Token], m: Modality, source: str):
        self.toks = toks
        self.i = 0
        self.m = m
        self.source = source
        self.globals: dict[str, Term] = {}
        self.spans: dict[int, Span] = {}
        self.binders: dict[int, str] = {}
        self.keep: list = []

    # --- token helpers ---------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col, self.source)

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("sym", "kw")

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r} but found {found!r}")
        return self.advance()

    def expect_kind(self, kind: str) -> Token:
        if self.tok.kind != kind:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {kind} but found {found!r}")
        return self.advance()

    def mark(self, node: Term, start: Token) -> Term:
        prev = self.toks[self.i - 1] if self.i > 0 else start
        self.spans[id(node)] = Span(start.line, start.col, prev.line, prev.end_col)
        self.keep.append(node)
        return node

    # --- top level -------------------------------------------------------------------

    def file(self) -> list[Definition]:
        defs: list[Definition] = []
        while self.tok.kind != "eof":
            start = self.expect("def")
            name_tok = self.expect_kind("ident")
            name = name_tok.text
            if name in self.globals:
                raise self.error(f"duplicate definition {name!r}", name_tok)
            self.expect(":")
            ty = self.expr([])
            self.expect(":=")
            body = self.expr([])
            end = self.toks[self.i - 1]
            defs.append(Definition(name, ty, body, Span(start.line, start.col, end.line, end.end_col)))
            self.globals[name] = Ann(body, ty)
        return defs

    # --- grades ---------------------------------------------------------------------

    def grades(self, n: int) -> list[str]:
        self.expect("[")
        out = []
        for k in range(n):
            if k:
                self.expect(",")
            tok = self.tok
            if tok.kind not in ("grade", "num", "ident"):
                raise self.error(f"expected a grade but found {tok.text!r}")
            self.advance()
            try:
                out.append(self.m.parse_grade(tok.text))
            except ModalityError as e:
                raise self.error(str(e), tok) from None
        self.expect("]")
        return out

    def binder_name(self) -> str:
        tok = self.tok
        if tok.kind != "ident":
            raise self.error(f"expected a variable name but found {tok.text!r}")
        self.advance()
        return tok.text

    def bound_group(self, env: list[str], count: int) -> Term:
        """``( x1 .. xk . body )`` binding ``count`` names."""
        self.expect("(")
        names = [self.binder_name() for _ in range(count)]
        self.expect(".")
        body = self.expr(env + names)
        self.expect(")")
        return body

    # --- terms ------------------------------------------------------------------------

    def expr(self, env: list[str]) -> Term:
        start = self.tok
        if self.at("\\") or self.at("λ"):
            self.advance()
            (p,) = self.grades(1)
            x = self.binder_name()
            self.expect(".")
            lam = Lam(p, self.expr(env + [x]))
            self.binders[id(lam)] = x
            return self.mark(lam, start)
        if self.at("Pi") or self.at("Sig&") or self.at("Sig@"):
            head = self.advance().text
            p, q = self.grades(2)
            self.expect("(")
            x = self.binder_name()
            self.expect(":")
            A = self.expr(env)
            self.expect(")")
            self.expect("->" if head == "Pi" else "**")
            B = self.expr(env + [x])
            if head == "Pi":
                return self.mark(Pi(p, q, A, B), start)
            return self.mark(Sigma(STRONG if head == "Sig&" else WEAK, p, q, A, B), start)
        return self.application(env)

    def application(self, env: list[str]) -> Term:
        start = self.tok
        t = self.arg(env)
        while self.at("@"):
            self.advance()
            (p,) = self.grades(1)
            u = self.arg(env)
            t = self.mark(App(t, p, u), start)
        return t

    def arg(self, env: list[str]) -> Term:
        start = self.tok
        match start.text if start.kind == "kw" else None:
            case "suc":
                self.advance()
                return self.mark(Suc(self.arg(env)), start)
            case "fst" | "snd":
                self.advance()
                (p,) = self.grades(1)
                a = self.arg(env)
                return self.mark(Fst(p, a) if start.text == "fst" else Snd(p, a), start)
            case "prodrec":
                self.advance()
                r, p, q = self.grades(3)
                A = self.bound_group(env, 1)
                s = self.arg(env)
                u = self.bound_group(env, 2)
                return self.mark(Prodrec(r, p, q, A, s, u), start)
            case "natrec":
                self.advance()
                p, q, r = self.grades(3)
                A = self.bound_group(env, 1)
                z = self.arg(env)
                s = self.bound_group(env, 2)
                n = self.arg(env)
                return self.mark(Natrec(p, q, r, A, z, s, n), start)
            case "emptyrec":
                self.advance()
                (p,) = self.grades(1)
                A = self.arg(env)
                s = self.arg(env)
                return self.mark(Emptyrec(p, A, s), start)
            case "unitrec":
                self.advance()
                p, q = self.grades(2)
                A = self.bound_group(env, 1)
                s = self.arg(env)
                u = self.arg(env)
                return self.mark(Unitrec(p, q, A, s, u), start)
        return self.atom(env)

    def atom(self, env: list[str]) -> Term:
        tok = self.tok
        match tok.kind, tok.text:
            case "kw", "U":
                self.advance()
                return self.mark(U(), tok)
            case "kw", "Nat":
                self.advance()
                return self.mark(Nat(), tok)
            case "kw", "Empty":
                self.advance()
                return self.mark(Empty(), tok)
            case "kw", "zero":
                self.advance()
                return self.mark(Zero(), tok)
            case "kw", ("Unit&" | "Unit@"):
                self.advance()
                return self.mark(Unit(tok.text[-1]), tok)
            case "kw", ("star&" | "star@"):
                self.advance()
                return self.mark(Star(tok.text[-1]), tok)
            case "num", digits:
                self.advance()
                t: Term = Zero()
                for _ in range(int(digits)):
                    t = Suc(t)
                return self.mark(t, tok)
            case "ident", name:
                self.advance()
                for depth, bound in enumerate(reversed(env)):
                    if bound == name:
                        return self.mark(Var(depth), tok)
                if name in self.globals:
                    return self.mark(self.globals[name], tok)
                raise self.error(f"unbound name {name!r}", tok)
            case "sym", "(":
                self.advance()
                t = self.expr(env)
                if self.at(":"):
                    self.advance()
                    A = self.expr(env)
                    self.expect(")")
                    return self.mark(Ann(t, A), tok)
                if self.at(",&") or self.at(",@"):
                    k = self.advance().text[-1]
                    (p,) = self.grades(1)
                    u = self.expr(env)
                    self.expect(")")
                    return self.mark(Pair(k, p, t, u), tok)
                self.expect(")")
                return t
        found = tok.text or "end of input"
        raise self.error(f"expected a term but found {found!r}")


# ---------------------------------------------------------------------------
# Pretty-printing

_EXPR, _APP, _ARG = 0, 1, 2


def _numeral_value(t: Term) -> int | None:
    n = 0
    while isinstance(t, Suc):
        n += 1
        t = t.arg
    return n if isinstance(t, Zero) else None


def pretty(t: Term, names: Sequence[str] = ()) -> str:
    """Render ``t`` in surface syntax; ``names`` lists free variables, outermost first."""
    return _Printer().go(t, list(names), _EXPR)


class _Printer:
    def fresh(self, env: list[str], hint: str = "x") -> str:
        k = len(env)
        name = f"{hint}{k}"
        while name in env:
            k += 1
            name = f"{hint}{k}"
        return name

    def paren(self, s: str, need: bool) -> str:
        return f"({s})" if need else s

    def group(self, body: Term, env: list[str], hints: Sequence[str]) -> str:
        names = []
        for h in hints:
            names.append(self.fresh(env + names, h))
        return f"({' '.join(names)}. {self.go(body, env + names, _EXPR)})"

    def go(self, t: Term, env: list[str], prec: int) -> str:
        match t:
            case Var(i):
                if i >= len(env):
                    raise ValueError(f"cannot print free variable #{i} without a name")
                return env[len(env) - 1 - i]
            case U():
                return "U"
            case Nat():
                return "Nat"
            case Empty():
                return "Empty"
            case Unit(k):
                return f"Unit{k}"
            case Star(k):
                return f"star{k}"
            case Zero() | Suc() if _numeral_value(t) is not None:
                return str(_numeral_value(t))
            case Lam(p, body):
                x = self.fresh(env)
                return self.paren(f"\\[{p}] {x}. {self.go(body, env + [x], _EXPR)}", prec > _EXPR)
            case Pi(p, q, A, B):
                x = self.fresh(env)
                s = f"Pi[{p},{q}] ({x} : {self.go(A, env, _EXPR)}) -> {self.go(B, env + [x], _EXPR)}"
                return self.paren(s, prec > _EXPR)
            case Sigma(k, p, q, A, B):
                x = self.fresh(env)
                s = f"Sig{k}[{p},{q}] ({x} : {self.go(A, env, _EXPR)}) ** {self.go(B, env + [x], _EXPR)}"
                return self.paren(s, prec > _EXPR)
            case App(f, p, u):
                s = f"{self.go(f, env, _APP)} @[{p}] {self.go(u, env, _ARG)}"
                return self.paren(s, prec > _APP)
            case Pair(k, p, a, b):
                return f"({self.go(a, env, _EXPR)} ,{k}[{p}] {self.go(b, env, _EXPR)})"
            case Ann(a, A):
                return f"({self.go(a, env, _EXPR)} : {self.go(A, env, _EXPR)})"
            case Suc(a):
                return self.paren(f"suc {self.go(a, env, _ARG)}", prec > _APP)
            case Fst(p, a) | Snd(p, a):
                word = "fst" if isinstance(t, Fst) else "snd"
                return self.paren(f"{word}[{p}] {self.go(a, env, _ARG)}", prec > _APP)
            case Prodrec(r, p, q, A, s, u):
                s_ = (f"prodrec[{r},{p},{q}] {self.group(A, env, 'z')} {self.go(s, env, _ARG)} "
                      f"{self.group(u, env, 'ab')}")
                return self.paren(s_, prec > _APP)
            case Natrec(p, q, r, A, z, s, n):
                s_ = (f"natrec[{p},{q},{r}] {self.group(A, env, 'n')} {self.go(z, env, _ARG)} "
                      f"{self.group(s, env, ('m', 'ih'))} {self.go(n, env, _ARG)}")
                return self.paren(s_, prec > _APP)
            case Emptyrec(p, A, s):
                return self.paren(f"emptyrec[{p}] {self.go(A, env, _ARG)} {self.go(s, env, _ARG)}", prec > _APP)
            case Unitrec(p, q, A, s, u):
                s_ = (f"unitrec[{p},{q}] {self.group(A, env, 'z')} {self.go(s, env, _ARG)} "
                      f"{self.go(u, env, _ARG)}")
                return self.paren(s_, prec > _APP)
        raise TypeError(f"not a source term: {t!r}")


def iter_definitions(file: SourceFile) -> Iterator[Definition]:
    yield from file.definitions
