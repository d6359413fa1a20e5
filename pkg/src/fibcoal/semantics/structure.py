"""Structures: interpretations of a fibred signature as functors, natural
transformations and predicate liftings."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Sequence

from ..signature import FibMorphism, FibObject, Generator, ModalitySymbol
from .values import DEFAULT_TOLERANCE, ShapeError

Subset = Any  # anything supporting ``in``: frozenset, Predicate, Everything


class FunctorKind:
    """Interpretation of one object generator as an endofunctor on Set.

    ``fmap`` applies ``fn`` to every element of the next layer in; ``check``
    validates the outer layer and recurses with ``inner``.
    """

    name = "functor"

    def fmap(self, st: "Structure", fn: Callable, v):
        raise NotImplementedError

    def check(self, st: "Structure", v, inner: Callable[[Any], None]) -> None:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}()"


@dataclass(frozen=True)
class Lifting:
    """A predicate lifting ``2^arity => 2 . [[fibre]]`` as a membership test."""

    name: str
    arity: int
    fibre: FibObject
    member: Callable[[Sequence[Subset], Any], bool] = field(compare=False)

    def __call__(self, args: Sequence[Subset], v) -> bool:
        if len(args) != self.arity:
            raise ShapeError(f"lifting {self.name} of arity {self.arity} given {len(args)} subsets")
        return bool(self.member(args, v))


@dataclass(frozen=True)
class NatTrans:
    name: str
    source: FibObject
    target: FibObject
    component: Callable[[Any], Any] = field(compare=False)

    def __call__(self, v):
        return self.component(v)


@dataclass
class Structure:
    """Interprets object generators, morphism families and modality families.

    ``liftings`` and ``nats`` map family names to factories taking the
    parameter tuple; instances are memoised.
    """

    functors: dict[str, FunctorKind] = field(default_factory=dict)
    nats: dict[str, Callable[[tuple], Callable[[Any], Any]]] = field(default_factory=dict)
    liftings: dict[str, Callable[[tuple], Lifting]] = field(default_factory=dict)
    tolerance: float = DEFAULT_TOLERANCE
    _lift_cache: dict = field(default_factory=dict, repr=False)
    _nat_cache: dict = field(default_factory=dict, repr=False)

    def lifting(self, symbol: ModalitySymbol) -> Lifting:
        key = (symbol.name, symbol.params)
        if key not in self._lift_cache:
            try:
                factory = self.liftings[symbol.name]
            except KeyError:
                raise ShapeError(f"no lifting interprets {symbol.name!r}") from None
            self._lift_cache[key] = factory(symbol.params)
        return self._lift_cache[key]

    def nat(self, gen: Generator) -> NatTrans:
        key = (gen.name, gen.params, gen.source, gen.target)
        if key not in self._nat_cache:
            try:
                factory = self.nats[gen.name]
            except KeyError:
                raise ShapeError(f"no natural transformation interprets {gen.name!r}") from None
            self._nat_cache[key] = NatTrans(str(gen), gen.source, gen.target, factory(gen.params))
        return self._nat_cache[key]

    def merge(self, other: "Structure") -> "Structure":
        return Structure(
            {**self.functors, **other.functors},
            {**self.nats, **other.nats},
            {**self.liftings, **other.liftings},
            min(self.tolerance, other.tolerance),
        )


def map_functor(obj: FibObject | tuple, st: Structure, h: Callable[[Hashable], Hashable], v):
    """The action ``[[obj]](h)`` on a value; the word is read outermost first."""
    word = obj.word if isinstance(obj, FibObject) else tuple(obj)
    if not word:
        return h(v)
    kind = _kind(st, word[0])
    rest = word[1:]
    return kind.fmap(st, lambda w: map_functor(rest, st, h, w), v)


def check_shape(obj: FibObject | tuple, st: Structure, v, carrier=None) -> None:
    """Raise :class:`ShapeError` unless ``v`` inhabits ``[[obj]](carrier)``.

    Lazy tables are only checked on entries computed so far.
    """
    word = obj.word if isinstance(obj, FibObject) else tuple(obj)
    if not word:
        if carrier is not None and v not in carrier:
            raise ShapeError(f"state {v!r} escapes the carrier")
        return
    _kind(st, word[0]).check(st, v, lambda w: check_shape(word[1:], st, w, carrier))


def _kind(st: Structure, name: str) -> FunctorKind:
    try:
        return st.functors[name]
    except KeyError:
        raise ShapeError(f"object generator {name!r} has no interpretation") from None


def apply_nat_trans(n: NatTrans, v):
    """The component of ``n`` at whatever carrier ``v`` lives over."""
    return n(v)


def apply_morphism(f: FibMorphism, st: Structure, v):
    """``[[f]]`` on a value: each step acts beneath its left whiskering."""
    for step in f.steps:
        nat = st.nat(step.gen)
        v = map_functor(step.left, st, nat.component, v)
    return v
