"""Surface syntax for formulae and modality expressions.

Formulae::

    T@A  T  true  F@A  false        top / bottom (unannotated ones get their fibre from context)
    !phi   phi & psi   phi | psi   phi -> psi
    &(phi, ...)                     n-ary conjunction (at least one conjunct)
    name[params](phi, ...)          modality application; a 0-ary modality may drop "()"
    name[params](phi)               adaptation, when ``name`` is a morphism
    {morph}(phi)                    adaptation along a composite morphism
    <mexpr>(phi, ...)               application of a compound modality expression

Modality expressions::

    name[params]   ~m   (m & m)   &(m)   m^f   m@i/k   (m ; m')

Morphisms::

    name[params]   name{1,2}   id@A   g . f   [L|f|R]   (f)

Objects are ``*``-separated words of generators, ``I`` being the unit.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..signature import (
    FibMorphism, FibObject, FibredSignature, SignatureError, _format_params,
    compose_morphisms, format_morphism, tensor_morphism,
)
from .ast import (
    Adapt, Apply, Base, Conj, Formula, MConj, MNeg, ModalityExpr, Neg, Superscript,
    Then, Top, Weaken, disj, implies,
)


class ParseError(Exception):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"{message} at line {line}, column {column}")


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<arrow>->)
  | (?P<num>-?\d+(?:\.\d*)?(?:[eE][-+]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<str>"[^"\n]*")
  | (?P<op>[!&|()\[\]{}<>,;~^@./*])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            toks.append(Token(kind, chunk, line, pos - line_start + 1))
        for i, ch in enumerate(chunk):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    toks.append(Token("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str, sig: FibredSignature):
        self.toks = tokenize(text)
        self.i = 0
        self.sig = sig

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("op", "arrow", "name")

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            self.error(f"expected {text!r}, found {found!r}")
        t = self.tok
        self.i += 1
        return t

    def name(self) -> str:
        if self.tok.kind != "name":
            self.error(f"expected a name, found {self.tok.text or 'end of input'!r}")
        t = self.tok.text
        self.i += 1
        return t

    def int_(self) -> int:
        if self.tok.kind != "num" or not re.fullmatch(r"-?\d+", self.tok.text):
            self.error("expected an integer")
        v = int(self.tok.text)
        self.i += 1
        return v

    def end(self):
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r}")

    def signature_call(self, fn, *args):
        tok = self.tok
        try:
            return fn(*args)
        except (SignatureError, KeyError, ValueError) as exc:
            self.error(str(exc), tok)

    # -- objects, params
    def obj(self) -> FibObject:
        names = [self.name()]
        while self.accept("*"):
            names.append(self.name())
        return self.signature_call(self.sig.obj, *names)

    def param(self):
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return float(t.text)
        if t.kind == "str":
            self.i += 1
            return t.text[1:-1]
        if self.accept("{"):
            return self.int_list()
        name = self.name()
        return self.sig.constants.get(name, name)

    def int_list(self) -> tuple:
        vals = [self.int_()]
        while self.accept(","):
            vals.append(self.int_())
        self.expect("}")
        return tuple(vals)

    def params(self) -> tuple:
        if self.accept("["):
            ps = [self.param()]
            while self.accept(","):
                ps.append(self.param())
            self.expect("]")
            return tuple(ps)
        if self.accept("{"):
            return (self.int_list(),)
        return ()

    # -- morphisms
    def morph(self) -> FibMorphism:
        m = self.mterm()
        while self.accept("."):
            f = self.mterm()
            m = self.signature_call(compose_morphisms, m, f)
        return m

    def mterm(self) -> FibMorphism:
        if self.accept("("):
            m = self.morph()
            self.expect(")")
            return m
        if self.accept("["):
            left = FibObject() if self.at("|") else self.obj()
            self.expect("|")
            m = self.morph()
            self.expect("|")
            right = FibObject() if self.at("]") else self.obj()
            self.expect("]")
            return tensor_morphism(left, m, right)
        if self.at("id") and self.peek().text == "@":
            self.i += 2
            return FibMorphism.identity(self.obj())
        return self.named_morphism()

    def named_morphism(self) -> FibMorphism:
        name = self.name()
        if name in self.sig.morphism_aliases:
            return self.sig.morphism_aliases[name]
        params = self.params()
        return self.signature_call(self.sig.generator, name, params)

    # -- modality expressions
    def mexpr(self) -> ModalityExpr:
        m = self.mconj()
        while self.accept(";"):
            m = Then(m, self.mconj())
        return m

    def mconj(self) -> ModalityExpr:
        parts = [self.munary()]
        while self.accept("&"):
            parts.append(self.munary())
        return parts[0] if len(parts) == 1 else MConj(tuple(parts))

    def munary(self) -> ModalityExpr:
        if self.accept("~"):
            return MNeg(self.munary())
        return self.mpost()

    def mpost(self) -> ModalityExpr:
        m = self.matom()
        while True:
            if self.accept("^"):
                if self.accept("{"):
                    f = self.morph()
                    self.expect("}")
                else:
                    f = self.mterm()
                m = Superscript(m, f)
            elif self.at("@") and self.peek().kind == "num":
                self.i += 1
                index = self.int_()
                self.expect("/")
                m = Weaken(m, self.int_(), index)
            else:
                return m

    def matom(self) -> ModalityExpr:
        if self.accept("("):
            m = self.mexpr()
            self.expect(")")
            return m
        if self.at("&") and self.peek().text == "(":
            self.i += 2
            parts = [self.mexpr()]
            while self.accept(","):
                parts.append(self.mexpr())
            self.expect(")")
            return MConj(tuple(parts))
        tok = self.tok
        name = self.name()
        params = self.params()
        return self.modality_named(name, params, tok)

    def modality_named(self, name: str, params: tuple, tok: Token) -> ModalityExpr:
        if name in self.sig.macros:
            return self.signature_call(self.sig.macros[name], params)
        if self.sig.modality_family(name) is None:
            self.error(f"unknown modality {name!r}", tok)
        symbol, fibre = self.signature_call(self.sig.symbol, name, params)
        return Base(symbol, fibre)

    # -- formulae
    def formula(self) -> Formula:
        lhs = self.disjunction()
        if self.accept("->"):
            return implies(lhs, self.formula())
        return lhs

    def disjunction(self) -> Formula:
        parts = [self.conjunction()]
        while self.accept("|"):
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else disj(*parts)

    def conjunction(self) -> Formula:
        parts = [self.unary()]
        while self.accept("&"):
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else Conj(tuple(parts))

    def unary(self) -> Formula:
        if self.accept("!"):
            return Neg(self.unary())
        return self.primary()

    def args(self) -> tuple[Formula, ...]:
        self.expect("(")
        if self.accept(")"):
            return ()
        out = [self.formula()]
        while self.accept(","):
            out.append(self.formula())
        self.expect(")")
        return tuple(out)

    def top_fibre(self) -> FibObject | None:
        if self.accept("@"):
            return self.obj()
        return None

    def primary(self) -> Formula:
        tok = self.tok
        if self.accept("("):
            phi = self.formula()
            self.expect(")")
            return phi
        if self.at("&") and self.peek().text == "(":
            self.i += 1
            parts = self.args()
            if not parts:
                self.error("a conjunction needs at least one conjunct", tok)
            return Conj(parts)
        if self.accept("<"):
            m = self.mexpr()
            self.expect(">")
            return Apply(m, self.args() if self.at("(") else ())
        if self.accept("{"):
            f = self.morph()
            self.expect("}")
            return self.adapt(f, tok)
        if tok.kind != "name":
            self.error(f"expected a formula, found {tok.text or 'end of input'!r}")
        if tok.text in ("T", "true"):
            self.i += 1
            return Top(self.top_fibre() if tok.text == "T" else None)
        if tok.text in ("F", "false"):
            self.i += 1
            return Neg(Top(self.top_fibre() if tok.text == "F" else None))
        name = tok.text
        if name in self.sig.morphism_aliases or self.sig.morphism_family(name) is not None:
            return self.adapt(self.named_morphism(), tok)
        self.i += 1
        params = self.params()
        m = self.modality_named(name, params, tok)
        return Apply(m, self.args() if self.at("(") else ())

    def adapt(self, f: FibMorphism, tok: Token) -> Formula:
        args = self.args()
        if len(args) != 1:
            self.error("an adaptation takes exactly one formula", tok)
        return Adapt(f, args[0])


def parse_formula(text: str, signature: FibredSignature) -> Formula:
    p = _Parser(text, signature)
    phi = p.formula()
    p.end()
    return phi


def parse_modality(text: str, signature: FibredSignature) -> ModalityExpr:
    p = _Parser(text, signature)
    m = p.mexpr()
    p.end()
    return m


def parse_morphism(text: str, signature: FibredSignature) -> FibMorphism:
    p = _Parser(text, signature)
    m = p.morph()
    p.end()
    return m


# -- printing ---------------------------------------------------------------

def _morph_atom(f: FibMorphism) -> str:
    s = format_morphism(f)
    if len(f.steps) == 1 and not s.startswith("["):
        return s
    return "{" + s + "}"


def format_modality(e: ModalityExpr) -> str:
    match e:
        case Base(symbol, _):
            return symbol.name + _format_params(symbol.params)
        case MNeg(inner):
            return "~" + format_modality(inner)
        case MConj(parts) if len(parts) == 1:
            return "&(" + format_modality(parts[0]) + ")"
        case MConj(parts):
            return "(" + " & ".join(map(_mconj_part, parts)) + ")"
        case Superscript(inner, f):
            return _postfix_base(inner) + "^" + _morph_atom(f)
        case Weaken(inner, arity, index):
            return _postfix_base(inner) + f"@{index}/{arity}"
        case Then(first, second):
            return "(" + format_modality(first) + " ; " + format_modality(second) + ")"
    raise TypeError(e)


def _postfix_base(e: ModalityExpr) -> str:
    s = format_modality(e)
    return "(" + s + ")" if isinstance(e, MNeg) else s


def _mconj_part(e: ModalityExpr) -> str:
    # "&" binds tighter than ";" but looser than "~"/"^": only Then needs care, and it is parenthesised
    return format_modality(e)


def _app_head(e: ModalityExpr) -> str:
    if isinstance(e, Base):
        return format_modality(e)
    return "<" + format_modality(e) + ">"


def format_formula(phi: Formula) -> str:
    match phi:
        case Top(None):
            return "true"
        case Top(fibre):
            return f"T@{fibre}"
        case Neg(inner):
            return "!" + _atomic(inner)
        case Conj(parts) if len(parts) == 1:
            return "&(" + format_formula(parts[0]) + ")"
        case Conj(parts):
            return "(" + " & ".join(_atomic(p) for p in parts) + ")"
        case Adapt(f, inner):
            return _morph_atom(f) + "(" + format_formula(inner) + ")"
        case Apply(mod, args):
            head = _app_head(mod)
            if not args:
                return head + "()" if isinstance(mod, Base) else head
            return head + "(" + ", ".join(format_formula(a) for a in args) + ")"
    raise TypeError(phi)


def _atomic(phi: Formula) -> str:
    return format_formula(phi)
