"""The two mutually recursive ASTs: modality expressions and formulae.

All nodes are frozen dataclasses, so they hash and compare structurally.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from ..signature import FibMorphism, FibObject, ModalitySymbol


# -- modality expressions ---------------------------------------------------

@dataclass(frozen=True)
class Base:
    symbol: ModalitySymbol
    fibre: FibObject


@dataclass(frozen=True)
class MNeg:
    inner: "ModalityExpr"


@dataclass(frozen=True)
class MConj:
    parts: tuple["ModalityExpr", ...]


@dataclass(frozen=True)
class Superscript:
    inner: "ModalityExpr"
    morphism: FibMorphism


@dataclass(frozen=True)
class Then:
    """``first`` lifts subsets of X to subsets of [[A]]X, ``second`` (unary) continues on [[B]]."""

    first: "ModalityExpr"
    second: "ModalityExpr"


@dataclass(frozen=True)
class Weaken:
    """Unary ``inner`` viewed as an ``arity``-ary modality reading argument ``index``."""

    inner: "ModalityExpr"
    arity: int
    index: int


ModalityExpr = Union[Base, MNeg, MConj, Superscript, Then, Weaken]


# -- formulae ---------------------------------------------------------------

@dataclass(frozen=True)
class Top:
    fibre: FibObject | None = None  # None until elaborated from context


@dataclass(frozen=True)
class Neg:
    inner: "Formula"


@dataclass(frozen=True)
class Conj:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Adapt:
    morphism: FibMorphism
    inner: "Formula"


@dataclass(frozen=True)
class Apply:
    modality: ModalityExpr
    args: tuple["Formula", ...] = ()


Formula = Union[Top, Neg, Conj, Adapt, Apply]


def bottom(fibre: FibObject | None = None) -> Neg:
    return Neg(Top(fibre))


def implies(a: Formula, b: Formula) -> Neg:
    return Neg(Conj((a, Neg(b))))


def disj(*parts: Formula) -> Neg:
    return Neg(Conj(tuple(Neg(p) for p in parts)))


def subformulas(phi: Formula) -> Iterator[Formula]:
    yield phi
    match phi:
        case Neg(inner) | Adapt(_, inner):
            yield from subformulas(inner)
        case Conj(parts) | Apply(_, parts):
            for p in parts:
                yield from subformulas(p)


def has_adapt(phi: Formula) -> bool:
    return any(isinstance(s, Adapt) for s in subformulas(phi))


def modal_depth(phi: Formula) -> int:
    match phi:
        case Top():
            return 0
        case Neg(inner) | Adapt(_, inner):
            return modal_depth(inner)
        case Conj(parts):
            return max(modal_depth(p) for p in parts)
        case Apply(_, args):
            return 1 + max((modal_depth(a) for a in args), default=0)
    raise TypeError(phi)


def formula_size(phi: Formula) -> int:
    return sum(1 for _ in subformulas(phi))
