"""Executable property checks on finite instances.

Every check returns a :class:`PropertyReport` listing counterexamples
instead of raising, so harnesses can aggregate them.  Liftings are unary
unless noted; a "family" is a sequence of :class:`Lifting` objects, and the
``values`` of an instance are a finite sample of ``[[A]](X)``.

Separation checks compute, for each sampled value, its membership vector
over every (lifting, subset) test; two distinct values with equal vectors are
a counterexample.  This is linear in the sample instead of quadratic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Hashable, Iterable, Sequence

from ..signature import FibMorphism, FibObject
from ..syntax.ast import Adapt, Formula, ModalityExpr
from ..syntax.translate import translate
from .evaluate import Coalgebra, Evaluator, eval_formula, eval_lifting, restructure
from .structure import Lifting, NatTrans, Structure, map_functor
from .values import Predicate


class HomomorphismError(ValueError):
    """The map offered as a coalgebra homomorphism is not one."""


@dataclass
class PropertyReport:
    kind: str
    checked: int = 0
    counterexamples: list = field(default_factory=list)
    failures: int = 0
    keep: int = 20

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def fail(self, *data) -> None:
        self.failures += 1
        if len(self.counterexamples) < self.keep:
            self.counterexamples.append(data)

    def merge(self, other: "PropertyReport") -> "PropertyReport":
        self.checked += other.checked
        self.failures += other.failures
        room = self.keep - len(self.counterexamples)
        self.counterexamples.extend(other.counterexamples[:max(room, 0)])
        return self

    def __str__(self):
        status = "ok" if self.ok else f"{self.failures} counterexample(s)"
        return f"{self.kind}: {self.checked} checks, {status}"


# -- building liftings from expressions ------------------------------------------

def expr_lifting(e: ModalityExpr, st: Structure, name: str | None = None, fibre: FibObject | None = None,
                 arity: int = 1) -> Lifting:
    """The lifting ``[[e]]`` as a :class:`Lifting` value."""
    return Lifting(name or repr(e), arity, fibre or FibObject(), lambda args, v: eval_lifting(e, st, args, v))


def then_lifting(first: Lifting, second: Lifting) -> Lifting:
    """``first`` on the inner layer, ``second`` (unary) on the outer one."""
    def member(args, v):
        return second((Predicate(lambda u: first(args, u), first.name),), v)
    return Lifting(f"({first.name} ; {second.name})", first.arity, second.fibre @ first.fibre, member)


def superscript_lifting(inner: Lifting, nat: Callable[[Any], Any], name: str = "f") -> Lifting:
    """``inner`` precomposed with a value map (the component of a natural transformation)."""
    return Lifting(f"{inner.name}^{name}", inner.arity, inner.fibre, lambda args, v: inner(args, nat(v)))


# -- monotonicity and separation ---------------------------------------------------

def _subset_pairs(subsets: Sequence[frozenset]) -> Iterable[tuple[frozenset, frozenset]]:
    for u in subsets:
        for v in subsets:
            if u <= v:
                yield u, v


def check_monotone(family: Sequence[Lifting], values: Sequence, subsets: Sequence[frozenset]) -> PropertyReport:
    """``U <= V`` implies ``lambda(U) <= lambda(V)`` on every sampled value."""
    rep = PropertyReport("monotone")
    pairs = list(_subset_pairs(subsets))
    for lam in family:
        for v in values:
            member = {u: lam((u,), v) for u in subsets}
            for u, w in pairs:
                rep.checked += 1
                if member[u] and not member[w]:
                    rep.fail(lam.name, v, sorted(u, key=repr), sorted(w, key=repr))
    return rep


def _signature(v, tests) -> tuple:
    return tuple(lam((u,), v) for lam, u in tests)


def _separation(kind: str, family: Sequence[Lifting], values: Sequence, subsets: Sequence[frozenset]) -> PropertyReport:
    rep = PropertyReport(kind)
    tests = [(lam, u) for lam in family for u in subsets]
    seen: dict[tuple, Any] = {}
    for v in dict.fromkeys(values):  # dedupe, keep order
        sig = _signature(v, tests)
        rep.checked += 1
        other = seen.setdefault(sig, v)
        if other is not v and other != v:
            rep.fail(other, v)
    return rep


def check_separating(family: Sequence[Lifting], values: Sequence, subsets: Sequence[frozenset]) -> PropertyReport:
    """Any two distinct sampled values are told apart by some lifting at some subset."""
    return _separation("separating", family, values, subsets)


def check_separates_by_singletons(family: Sequence[Lifting], values: Sequence, carrier: Sequence) -> PropertyReport:
    """As :func:`check_separating`, with only singleton subsets allowed."""
    return _separation("separates_by_singletons", family, values, [frozenset([x]) for x in carrier])


def check_mutually_surjective_on_singletons(family: Sequence[Lifting], universe: Sequence,
                                            subsets: Sequence[frozenset]) -> PropertyReport:
    """Every ``t`` in the (finite) ``universe = [[A]]X`` is the whole image ``lambda(U)`` for some lifting and U."""
    rep = PropertyReport("mutually_surjective_on_singletons")
    universe = list(dict.fromkeys(universe))
    images = set()
    for lam in family:
        for u in subsets:
            image = frozenset(t for t in universe if lam((u,), t))
            if len(image) == 1:
                images |= image
    for t in universe:
        rep.checked += 1
        if t not in images:
            rep.fail(t)
    return rep


def check_then_separating(inner: Sequence[Lifting], outer: Sequence[Lifting], values: Sequence,
                          subsets: Sequence[frozenset]) -> PropertyReport:
    """Separation of the composites ``inner_i ; outer_j`` on values of the composite functor."""
    return _separation("then_separating", [then_lifting(i, o) for i in inner for o in outer], values, subsets)


def check_superscript_separating(family: Sequence[Lifting], nats: Sequence[tuple[str, Callable]],
                                 values: Sequence, subsets: Sequence[frozenset]) -> PropertyReport:
    """Separation of ``lambda^f`` over all liftings and all given value maps (projections, evaluations)."""
    composed = [superscript_lifting(lam, fn, name) for lam in family for name, fn in nats]
    return _separation("superscript_separating", composed, values, subsets)


# -- naturality --------------------------------------------------------------------

def all_functions(xs: Sequence, ys: Sequence) -> Iterable[dict]:
    for image in product(ys, repeat=len(xs)):
        yield dict(zip(xs, image))


def check_lifting_naturality(lam: Lifting, st: Structure, fibre: FibObject, x: Sequence, y: Sequence,
                             values: Sequence, functions: Iterable[dict] | None = None,
                             subsets_y: Sequence[frozenset] | None = None) -> PropertyReport:
    """``v in lambda_X(h^-1 V)`` iff ``[[A]]h(v) in lambda_Y(V)`` for all ``h : X -> Y``."""
    from ..classical import subsets as all_subsets

    rep = PropertyReport("naturality")
    subsets_y = all_subsets(y) if subsets_y is None else subsets_y
    for h in (all_functions(x, y) if functions is None else functions):
        mapped = [map_functor(fibre, st, h.__getitem__, v) for v in values]
        for vs in subsets_y:
            pre = frozenset(a for a in x if h[a] in vs)
            for v, hv in zip(values, mapped):
                rep.checked += 1
                if lam((pre,), v) != lam((vs,), hv):
                    rep.fail(lam.name, h, sorted(vs, key=repr), v)
    return rep


def check_nat_naturality(n: NatTrans, st: Structure, x: Sequence, y: Sequence, values: Sequence,
                         functions: Iterable[dict] | None = None) -> PropertyReport:
    """``[[B]]h . n_X = n_Y . [[A]]h`` on every sampled value."""
    rep = PropertyReport("naturality")
    for h in (all_functions(x, y) if functions is None else functions):
        hf = h.__getitem__
        for v in values:
            rep.checked += 1
            lhs = map_functor(n.target, st, hf, n(v))
            rhs = n(map_functor(n.source, st, hf, v))
            if lhs != rhs:
                rep.fail(n.name, h, v, lhs, rhs)
    return rep


# -- translation and invariance ----------------------------------------------------

def check_translation(phi: Formula, f: FibMorphism, st: Structure, c: Coalgebra) -> PropertyReport:
    """``[[phi]]`` under ``[[f]] . gamma`` equals ``[[tau_f(phi)]]`` under ``gamma``, and both equal ``[[f phi]]``."""
    rep = PropertyReport("translation_soundness", checked=1)
    lhs = eval_formula(phi, st, restructure(c, st, f))
    adapted = eval_formula(Adapt(f, phi), st, c)
    rhs = eval_formula(translate(f, phi), st, c)
    if not lhs == adapted == rhs:
        rep.fail(phi, f, c, sorted(lhs, key=repr), sorted(rhs, key=repr))
    return rep


def check_homomorphism(st: Structure, c1: Coalgebra, c2: Coalgebra, h: Callable[[Hashable], Hashable]) -> None:
    """Raise :class:`HomomorphismError` unless ``[[A]]h . gamma1 = gamma2 . h``."""
    if c1.fibre != c2.fibre:
        raise HomomorphismError(f"coalgebras live in different fibres {c1.fibre} and {c2.fibre}")
    targets = frozenset(c2.carrier)
    for x in c1.carrier:
        if h(x) not in targets:
            raise HomomorphismError(f"{x!r} is sent outside the target carrier")
        if map_functor(c1.fibre, st, h, c1(x)) != c2(h(x)):
            raise HomomorphismError(f"square fails at state {x!r}")


def check_homomorphism_invariance(phi: Formula, st: Structure, c1: Coalgebra, c2: Coalgebra,
                                  h: Callable[[Hashable], Hashable]) -> bool:
    """``[[phi]]_1 = h^-1 [[phi]]_2`` for a coalgebra homomorphism ``h`` (checked first)."""
    check_homomorphism(st, c1, c2, h)
    ev2 = Evaluator(st, c2)
    return eval_formula(phi, st, c1) == frozenset(x for x in c1.carrier if ev2.holds(phi, h(x)))


# -- dispatcher ---------------------------------------------------------------------

_KINDS: dict[str, Callable[..., PropertyReport]] = {
    "monotone": check_monotone,
    "separating": check_separating,
    "separates_by_singletons": check_separates_by_singletons,
    "mutually_surjective_on_singletons": check_mutually_surjective_on_singletons,
    "then_separating": check_then_separating,
    "superscript_separating": check_superscript_separating,
    "naturality": check_lifting_naturality,
    "translation_soundness": check_translation,
}


def check_property(kind: str, **instance) -> PropertyReport:
    """Run the named check; ``instance`` holds the keyword arguments of the matching ``check_*`` function."""
    try:
        fn = _KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown property {kind!r}; expected one of {sorted(_KINDS)}") from None
    return fn(**instance)

