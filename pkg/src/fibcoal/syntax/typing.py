"""Type checking for modality expressions and formulae."""
from __future__ import annotations

from ..signature import FibObject, FibredSignature
from .ast import (
    Adapt, Apply, Base, Conj, Formula, MConj, MNeg, ModalityExpr, Neg, Superscript,
    Then, Top, Weaken,
)

ModalityType = tuple[FibObject, int]


class TypingError(Exception):
    def __init__(self, message: str, location: tuple = (), expected=None, found=None):
        self.location = tuple(location)
        self.expected = expected
        self.found = found
        where = "/".join(map(str, self.location)) or "<root>"
        super().__init__(f"{message} (at {where})")


def _fmt_type(t) -> str:
    if isinstance(t, tuple):
        obj, arity = t
        return f"{obj}^{arity} -> {obj}"
    return str(t)


def type_of_modality(e: ModalityExpr, s: FibredSignature, loc: tuple = ()) -> ModalityType:
    match e:
        case Base(symbol, fibre):
            fam = s.modality_family(symbol.name)
            if fam is None:
                raise TypingError(f"undeclared modality {symbol.name!r}", loc)
            if fam.fibre != fibre:
                raise TypingError(
                    f"modality {symbol.name!r} lives on {fam.fibre}", loc, fam.fibre, fibre
                )
            if fam.arity != symbol.arity or fam.nparams != len(symbol.params):
                raise TypingError(f"modality {symbol.name!r} used with wrong arity/params", loc)
            return fibre, symbol.arity
        case MNeg(inner):
            return type_of_modality(inner, s, loc + ("neg",))
        case MConj(parts):
            if not parts:
                raise TypingError("empty conjunction of modalities", loc)
            first = type_of_modality(parts[0], s, loc + (0,))
            for i, p in enumerate(parts[1:], start=1):
                t = type_of_modality(p, s, loc + (i,))
                if t != first:
                    raise TypingError(
                        f"conjunct has type {_fmt_type(t)}, expected {_fmt_type(first)}",
                        loc + (i,), first, t,
                    )
            return first
        case Superscript(inner, f):
            obj, arity = type_of_modality(inner, s, loc + ("sup",))
            if f.target != obj:
                raise TypingError(
                    f"superscript morphism targets {f.target}, modality lives on {obj}",
                    loc, obj, f.target,
                )
            return f.source, arity
        case Then(first, second):
            a, arity = type_of_modality(first, s, loc + ("first",))
            b, b_arity = type_of_modality(second, s, loc + ("second",))
            if b_arity != 1:
                raise TypingError("second component of ';' must be unary", loc, 1, b_arity)
            return b @ a, arity
        case Weaken(inner, arity, index):
            obj, inner_arity = type_of_modality(inner, s, loc + ("weaken",))
            if inner_arity != 1:
                raise TypingError("only unary modalities can be weakened", loc, 1, inner_arity)
            if not 0 <= index < arity:
                raise TypingError(f"weakening index {index} outside arity {arity}", loc)
            return obj, arity
    raise TypingError(f"not a modality expression: {e!r}", loc)


def type_of_formula(phi: Formula, s: FibredSignature, loc: tuple = ()) -> FibObject:
    match phi:
        case Top(fibre):
            if fibre is None:
                raise TypingError("cannot infer the fibre of an unannotated T", loc)
            return fibre
        case Neg(inner):
            return type_of_formula(inner, s, loc + ("neg",))
        case Conj(parts):
            if not parts:
                raise TypingError("empty conjunction", loc)
            first = type_of_formula(parts[0], s, loc + (0,))
            for i, p in enumerate(parts[1:], start=1):
                t = type_of_formula(p, s, loc + (i,))
                if t != first:
                    raise TypingError(f"conjunct has type {t}, expected {first}", loc + (i,), first, t)
            return first
        case Adapt(f, inner):
            t = type_of_formula(inner, s, loc + (str(f),))
            if t != f.target:
                raise TypingError(
                    f"adaptation {f} expects a {f.target}-formula, got {t}", loc, f.target, t
                )
            return f.source
        case Apply(mod, args):
            obj, arity = type_of_modality(mod, s, loc + ("modality",))
            if len(args) != arity:
                raise TypingError(
                    f"modality of arity {arity} applied to {len(args)} arguments", loc, arity, len(args)
                )
            for i, a in enumerate(args):
                t = type_of_formula(a, s, loc + (i,))
                if t != obj:
                    raise TypingError(f"argument has type {t}, expected {obj}", loc + (i,), obj, t)
            return obj
    raise TypingError(f"not a formula: {phi!r}", loc)


def _infer(phi: Formula, s: FibredSignature) -> FibObject | None:
    match phi:
        case Top(fibre):
            return fibre
        case Neg(inner):
            return _infer(inner, s)
        case Conj(parts):
            for p in parts:
                t = _infer(p, s)
                if t is not None:
                    return t
            return None
        case Adapt(f, _):
            return f.source
        case Apply(mod, _):
            return type_of_modality(mod, s)[0]
    return None


def elaborate(phi: Formula, s: FibredSignature, expected: FibObject | None = None) -> Formula:
    """Fill in the fibre of every unannotated ``T`` from its context, then type check."""
    if expected is None:
        expected = _infer(phi, s)
        if expected is None:
            raise TypingError("cannot infer the fibre of the formula; annotate a T@A")
    out = _elab(phi, s, expected)
    found = type_of_formula(out, s)
    if found != expected:
        raise TypingError(f"formula has type {found}, expected {expected}", (), expected, found)
    return out


def _elab(phi: Formula, s: FibredSignature, expected: FibObject) -> Formula:
    match phi:
        case Top(None):
            return Top(expected)
        case Top(_):
            return phi
        case Neg(inner):
            return Neg(_elab(inner, s, expected))
        case Conj(parts):
            return Conj(tuple(_elab(p, s, expected) for p in parts))
        case Adapt(f, inner):
            return Adapt(f, _elab(inner, s, f.target))
        case Apply(mod, args):
            obj, _ = type_of_modality(mod, s)
            return Apply(mod, tuple(_elab(a, s, obj) for a in args))
    raise TypingError(f"not a formula: {phi!r}")
