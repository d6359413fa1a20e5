"""Evaluation of modality expressions and formulae over coalgebras."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

from ..signature import FibObject
from ..syntax.ast import (
    Adapt, Apply, Base, Conj, Formula, MConj, MNeg, ModalityExpr, Neg, Superscript,
    Then, Top, Weaken,
)
from .structure import Structure, apply_morphism, check_shape
from .values import Predicate, ShapeError


def eval_lifting(e: ModalityExpr, st: Structure, args: Sequence, v) -> bool:
    """Is ``v`` in ``[[e]]_X(args)``?

    ``args`` are subsets of the carrier (anything supporting ``in``).  The
    intermediate subset of a ``Then`` lives in ``[[A]]X`` and is passed on
    intensionally.
    """
    match e:
        case Base(symbol, _):
            return st.lifting(symbol)(args, v)
        case MNeg(inner):
            return not eval_lifting(inner, st, args, v)
        case MConj(parts):
            # no short circuit: carrier closure relies on every branch being visited
            return all([eval_lifting(p, st, args, v) for p in parts])
        case Superscript(inner, f):
            return eval_lifting(inner, st, args, apply_morphism(f, st, v))
        case Then(first, second):
            w = Predicate(lambda u: eval_lifting(first, st, args, u), "then")
            return eval_lifting(second, st, (w,), v)
        case Weaken(inner, arity, index):
            if len(args) != arity:
                raise ShapeError(f"weakened modality of arity {arity} given {len(args)} subsets")
            return eval_lifting(inner, st, (args[index],), v)
    raise TypeError(f"not a modality expression: {e!r}")


@dataclass
class Coalgebra:
    """A coalgebra ``gamma : X -> [[fibre]](X)`` on a finite carrier.

    ``gamma`` is either a mapping or a callable; callables let the quantum
    backend compute successor structure on demand.
    """

    carrier: tuple
    gamma: Mapping | Callable[[Hashable], Any]
    fibre: FibObject

    def __post_init__(self):
        self.carrier = tuple(self.carrier)
        if len(set(self.carrier)) != len(self.carrier):
            raise ValueError("carrier states must be unique")

    def __call__(self, x):
        if callable(self.gamma):
            return self.gamma(x)
        try:
            return self.gamma[x]
        except KeyError:
            raise ShapeError(f"state {x!r} escapes the carrier") from None

    def validate(self, st: Structure) -> None:
        states = frozenset(self.carrier)
        for x in self.carrier:
            check_shape(self.fibre, st, self(x), states)


class _Context:
    """One structure map, plus memo tables for formulae evaluated under it."""

    def __init__(self, gamma: Callable):
        self.gamma = gamma
        self.cache: dict = {}
        self.gamma_cache: dict = {}
        self.children: dict = {}

    def value(self, x):
        try:
            return self.gamma_cache[x]
        except KeyError:
            v = self.gamma_cache[x] = self.gamma(x)
            return v


class Evaluator:
    """Pointwise, memoised formula evaluation.

    The argument subsets handed to liftings are intensional predicates over
    states, so only states that are actually reached get evaluated.  On a
    finite carrier this coincides with the set-based semantics.
    """

    def __init__(self, st: Structure, coalgebra: Coalgebra):
        self.st = st
        self.coalgebra = coalgebra
        self.root = _Context(coalgebra)
        self._keep: list = []

    def holds(self, phi: Formula, x, ctx: _Context | None = None) -> bool:
        ctx = ctx or self.root
        key = (id(phi), x)
        try:
            return ctx.cache[key]
        except KeyError:
            pass
        self._keep.append(phi)  # ids stay valid while memoised
        result = self._holds(phi, x, ctx)
        ctx.cache[key] = result
        return result

    def _holds(self, phi: Formula, x, ctx: _Context) -> bool:
        match phi:
            case Top():
                return True
            case Neg(inner):
                return not self.holds(inner, x, ctx)
            case Conj(parts):
                return all([self.holds(p, x, ctx) for p in parts])
            case Apply(mod, args):
                subsets = tuple(self._extension(a, ctx) for a in args)
                return eval_lifting(mod, self.st, subsets, ctx.value(x))
            case Adapt(f, inner):
                return self.holds(inner, x, self._adapted(ctx, f))
        raise TypeError(f"not a formula: {phi!r}")

    def _extension(self, phi: Formula, ctx: _Context) -> Predicate:
        return Predicate(lambda y: self.holds(phi, y, ctx), "formula")

    def _adapted(self, ctx: _Context, f) -> _Context:
        child = ctx.children.get(f)
        if child is None:
            child = ctx.children[f] = _Context(lambda y: apply_morphism(f, self.st, ctx.value(y)))
        return child

    def extension(self, phi: Formula, states: Iterable | None = None) -> frozenset:
        states = self.coalgebra.carrier if states is None else states
        return frozenset(x for x in states if self.holds(phi, x))


def eval_formula(phi: Formula, st: Structure, c: Coalgebra, states: Iterable | None = None) -> frozenset:
    """The set of states (by default: the whole carrier) satisfying ``phi``."""
    return Evaluator(st, c).extension(phi, states)


def restructure(c: Coalgebra, st: Structure, f) -> Coalgebra:
    """``(X, [[f]] . gamma)``, the coalgebra an adaptation evaluates under."""
    return Coalgebra(c.carrier, lambda x: apply_morphism(f, st, c(x)), f.target)
