"""Adaptation elimination.

``translate(f, phi)`` pushes the morphism ``f`` into every modality as a
superscript, so the result is an ordinary (adaptation-free) formula whose
meaning on ``(X, gamma)`` equals the meaning of ``phi`` on
``(X, [[f]] . gamma)``.
"""
from __future__ import annotations

from ..signature import FibMorphism, FibredSignature, compose_morphisms
from .ast import Adapt, Apply, Conj, Formula, Neg, Superscript, Top
from .typing import TypingError, type_of_formula


def translate(f: FibMorphism, phi: Formula, s: FibredSignature | None = None) -> Formula:
    if s is not None:
        t = type_of_formula(phi, s)
        if t != f.target:
            raise TypingError(f"cannot translate a {t}-formula along {f}", (), f.target, t)
    return _tau(f, phi)


def _tau(f: FibMorphism, phi: Formula) -> Formula:
    match phi:
        case Top(_):
            return Top(f.source)
        case Neg(inner):
            return Neg(_tau(f, inner))
        case Conj(parts):
            return Conj(tuple(_tau(f, p) for p in parts))
        case Apply(mod, args):
            mod = mod if f.is_identity else Superscript(mod, f)
            return Apply(mod, tuple(_tau(f, a) for a in args))
        case Adapt(g, inner):
            return _tau(compose_morphisms(g, f), inner)
    raise TypeError(f"not a formula: {phi!r}")


def eliminate_adaptations(phi: Formula, s: FibredSignature) -> Formula:
    """``translate`` along the identity of the formula's own type."""
    return translate(FibMorphism.identity(type_of_formula(phi, s)), phi)
