"""Finite classical backends: powerset (Kripke frames), exponents over a
finite label set (LTS), labelled pairs, finite distributions and products,
with the stock predicate liftings and natural transformations over them.

Object generators of the classical signature:

=======  ==========================================
``P``    finite powerset
``Exp``  ``(-)^L`` for the structure's label set L
``D``    finitely supported distributions
``R``    ``Sigma x (-)`` with real labels
``PD``   the product ``P x D``
=======  ==========================================

``I`` (the empty word) is the identity functor; ``top`` and ``not`` are its
liftings.  ``LTS`` abbreviates ``Exp*P``.
"""
from __future__ import annotations

from itertools import combinations
from typing import Hashable, Iterable, Sequence

from .signature import (
    UNIT, FibObject, FibredSignature, ModalityFamily, ModalitySymbol, MorphismFamily,
)
from .semantics.structure import FunctorKind, Lifting, Structure, map_functor
from .semantics.values import DEFAULT_TOLERANCE, Dist, Pair, ShapeError, Table, Tup
from .syntax.ast import Base, Then

P = FibObject.of("P")
D = FibObject.of("D")
R = FibObject.of("R")
EXP = FibObject.of("Exp")
PD = FibObject.of("PD")
LTS = EXP @ P


# -- functor interpreters ---------------------------------------------------

class PowersetKind(FunctorKind):
    name = "P"

    def fmap(self, st, fn, v):
        return frozenset(fn(x) for x in v)

    def check(self, st, v, inner):
        if not isinstance(v, frozenset):
            raise ShapeError(f"expected a finite set, got {v!r}")
        for x in v:
            inner(x)


class ExpKind(FunctorKind):
    """``(-)^K``.  With ``keys`` given, tables must be total over exactly those keys."""

    name = "Exp"

    def __init__(self, keys: Iterable[Hashable] | None = None):
        self.keys = None if keys is None else frozenset(keys)

    def fmap(self, st, fn, v):
        return v.map(fn)

    def check(self, st, v, inner):
        if not isinstance(v, Table):
            raise ShapeError(f"expected a table, got {v!r}")
        if self.keys is not None and not v.is_lazy and frozenset(v.keys()) != self.keys:
            raise ShapeError(f"table keys {sorted(v.keys())} differ from {sorted(self.keys)}")
        for _, w in v.items():
            inner(w)


class DistKind(FunctorKind):
    name = "D"

    def __init__(self, tolerance: float = DEFAULT_TOLERANCE):
        self.tolerance = tolerance

    def fmap(self, st, fn, v):
        # masses landing on the same point are summed
        return Dist(((fn(x), p) for x, p in v.items()), tolerance=self.tolerance)

    def check(self, st, v, inner):
        if not isinstance(v, Dist):
            raise ShapeError(f"expected a distribution, got {v!r}")
        total = sum(p for _, p in v.items())
        if abs(total - 1.0) > self.tolerance:
            raise ShapeError(f"distribution sums to {total}")
        for x in v:
            inner(x)


class PairKind(FunctorKind):
    name = "R"

    def fmap(self, st, fn, v):
        return Pair(v.label, fn(v.inner))

    def check(self, st, v, inner):
        if not isinstance(v, Pair):
            raise ShapeError(f"expected a labelled pair, got {v!r}")
        inner(v.inner)


class ProductKind(FunctorKind):
    name = "prod"

    def __init__(self, components: Sequence[FibObject]):
        self.components = tuple(components)

    def fmap(self, st, fn, v):
        return Tup(map_functor(c, st, fn, comp) for c, comp in zip(self.components, v))

    def check(self, st, v, inner):
        if not isinstance(v, Tup) or len(v) != len(self.components):
            raise ShapeError(f"expected a {len(self.components)}-tuple, got {v!r}")
        for c, comp in zip(self.components, v):
            _check_under(c, st, comp, inner)


def _check_under(obj: FibObject, st: Structure, v, inner):
    if not obj.word:
        inner(v)
        return
    kind = st.functors[obj.word[0]]
    kind.check(st, v, lambda w: _check_under(FibObject(obj.word[1:]), st, w, inner))


# -- liftings ---------------------------------------------------------------

def _close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol


def box_lifting() -> Lifting:
    """``S in box(U)  iff  S is a subset of U``."""
    return Lifting("box", 1, P, lambda args, s: all(x in args[0] for x in s))


def deq_lifting(p: float, tolerance: float = DEFAULT_TOLERANCE) -> Lifting:
    """Distributions giving ``U`` total mass exactly ``p``."""
    if not -tolerance <= p <= 1 + tolerance:
        raise ValueError(f"probability {p} outside [0, 1]")

    def member(args, d):
        if not isinstance(d, Dist):
            raise ShapeError(f"deq expects a distribution, got {d!r}")
        return _close(d.mass(args[0]), p, tolerance)

    return Lifting(f"deq[{p:g}]", 1, D, member)


def detcert_lifting(label, tolerance: float = DEFAULT_TOLERANCE) -> Lifting:
    """Pairs carrying exactly ``label`` whose second component lies in ``U``."""

    def member(args, v):
        if not isinstance(v, Pair):
            raise ShapeError(f"detcert expects a labelled pair, got {v!r}")
        if not _labels_equal(v.label, label, tolerance):
            return False
        return v.inner in args[0]

    return Lifting(f"detcert[{label}]", 1, R, member)


def _labels_equal(a, b, tol) -> bool:
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return _close(float(a), float(b), tol)
    return a == b


def dreq_explicit(d: Dist, subset, p: float, r, tolerance: float = DEFAULT_TOLERANCE) -> bool:
    """Closed form of ``dreq[p, r]``: mass on pairs ``(r, u)`` with ``u`` in ``subset`` equals ``p``."""
    total = sum(q for v, q in d.items() if _labels_equal(v.label, r, tolerance) and v.inner in subset)
    return _close(total, p, tolerance)


def top_lifting() -> Lifting:
    return Lifting("top", 0, UNIT, lambda args, v: True)


def not_lifting() -> Lifting:
    return Lifting("not", 1, UNIT, lambda args, v: v not in args[0])


# -- modality expressions over the stock symbols ----------------------------

def box() -> Base:
    return Base(ModalitySymbol("box", 1), P)


def deq(p: float) -> Base:
    return Base(ModalitySymbol("deq", 1, (float(p),)), D)


def detcert(label) -> Base:
    return Base(ModalitySymbol("detcert", 1, (_param(label),)), R)


def top() -> Base:
    return Base(ModalitySymbol("top", 0), UNIT)


def neg() -> Base:
    return Base(ModalitySymbol("not", 1), UNIT)


def dreq(p: float, r) -> Then:
    """``detcert[r] ; deq[p]`` on ``D*R``."""
    return Then(detcert(r), deq(p))


def _param(v):
    return float(v) if isinstance(v, (int, float)) else v


# -- natural transformations ------------------------------------------------

def _eval_at(params):
    (key,) = params
    def component(t):
        if not isinstance(t, Table):
            raise ShapeError(f"evaluation expects a table, got {t!r}")
        try:
            return t[key]
        except KeyError:
            raise ShapeError(f"table has no entry for {key!r}") from None
    return component


def _swap(params):
    a, b = params
    perm = {a: b, b: a}
    return lambda t: Table({k: t[perm.get(k, k)] for k in t.keys()})


def _support(params):
    return lambda d: frozenset(d.support)


def _singleton(params):
    return lambda x: frozenset([x])


def _dirac(params):
    return lambda x: Dist.dirac(x)


def _union(params):
    return lambda ss: frozenset().union(*ss)


def _flatten(params):
    def component(dd):
        acc: dict = {}
        for inner, p in dd.items():
            for x, q in inner.items():
                acc[x] = acc.get(x, 0.0) + p * q
        return Dist(acc)
    return component


def _project(params):
    (i,) = params
    return lambda t: t[int(i)]


def eval_nat(key):
    """Component function of ``ev[key]``: table ``t`` to ``t[key]``."""
    return _eval_at((key,))


def classical_signature(labels: Iterable[str] = ("a", "b")) -> FibredSignature:
    labels = tuple(labels)

    def ev_typing(params):
        if params[0] not in labels:
            raise ValueError(f"unknown label {params[0]!r}")
        return LTS, P

    def evd_typing(params):
        if params[0] not in labels:
            raise ValueError(f"unknown label {params[0]!r}")
        return EXP @ D, D

    def swap_typing(params):
        if len(params) != 2 or not set(params) <= set(labels):
            raise ValueError("swap takes two labels")
        return LTS, LTS

    def pi_typing(params):
        i = int(params[0])
        if i not in (0, 1):
            raise ValueError("PD has two projections")
        return PD, (P, D)[i]

    return FibredSignature(
        object_generators=("P", "Exp", "D", "R", "PD"),
        morphisms=(
            MorphismFamily("ev", typing=ev_typing),
            MorphismFamily("evd", typing=evd_typing),
            MorphismFamily("swap", typing=swap_typing),
            MorphismFamily("supp", D, P),
            MorphismFamily("eta", UNIT, P),
            MorphismFamily("dirac", UNIT, D),
            MorphismFamily("union", P @ P, P),
            MorphismFamily("flat", D @ D, D),
            MorphismFamily("pi", typing=pi_typing),
        ),
        modalities=(
            ModalityFamily("box", P, 1),
            ModalityFamily("deq", D, 1, 1),
            ModalityFamily("detcert", R, 1, 1),
            ModalityFamily("top", UNIT, 0),
            ModalityFamily("not", UNIT, 1),
        ),
        object_aliases={"LTS": LTS},
        macros={"dreq": lambda ps: dreq(*ps)},
    )


def classical_structure(labels: Iterable[str] = ("a", "b"),
                        tolerance: float = DEFAULT_TOLERANCE) -> Structure:
    return Structure(
        functors={
            "P": PowersetKind(),
            "Exp": ExpKind(labels),
            "D": DistKind(tolerance),
            "R": PairKind(),
            "PD": ProductKind((P, D)),
        },
        nats={
            "ev": _eval_at,
            "evd": _eval_at,
            "swap": _swap,
            "supp": _support,
            "eta": _singleton,
            "dirac": _dirac,
            "union": _union,
            "flat": _flatten,
            "pi": _project,
        },
        liftings={
            "box": lambda ps: box_lifting(),
            "deq": lambda ps: deq_lifting(ps[0], tolerance),
            "detcert": lambda ps: detcert_lifting(ps[0], tolerance),
            "top": lambda ps: top_lifting(),
            "not": lambda ps: not_lifting(),
        },
        tolerance=tolerance,
    )


# -- ready-made coalgebras --------------------------------------------------

def kripke_coalgebra(successors: dict):
    """A Kripke frame ``{state: iterable of successors}`` as a ``P``-coalgebra."""
    from .semantics.evaluate import Coalgebra

    return Coalgebra(tuple(successors), {x: frozenset(ys) for x, ys in successors.items()}, P)


def lts_coalgebra(transitions: dict, labels: Sequence[str]):
    """``{state: {label: successors}}``; missing labels mean no transitions."""
    from .semantics.evaluate import Coalgebra

    gamma = {
        x: Table({a: frozenset(by_label.get(a, ())) for a in labels})
        for x, by_label in transitions.items()
    }
    return Coalgebra(tuple(transitions), gamma, LTS)


def markov_coalgebra(chain: dict):
    """``{state: {successor: probability}}`` as a ``D``-coalgebra."""
    from .semantics.evaluate import Coalgebra

    return Coalgebra(tuple(chain), {x: Dist(ps) for x, ps in chain.items()}, D)


# -- bisimulation -------------------------------------------------------------

def bisimulation_classes(successors: dict) -> dict:
    """Coarsest bisimulation of a Kripke frame by partition refinement.

    Returns a map from each state to a canonical block index.
    """
    states = list(successors)
    block = {x: 0 for x in states}
    while True:
        signature = {x: (block[x], frozenset(block[y] for y in successors[x])) for x in states}
        ids: dict = {}
        refined = {x: ids.setdefault(signature[x], len(ids)) for x in states}
        if len(ids) == len(set(block.values())):
            return refined
        block = refined


def quotient_frame(successors: dict) -> tuple[dict, dict]:
    """The quotient frame by bisimilarity and the quotient map."""
    h = bisimulation_classes(successors)
    quotient: dict = {}
    for x, ys in successors.items():
        quotient.setdefault(h[x], frozenset(h[y] for y in ys))
    return quotient, h


# -- enumeration helpers used by property checks ----------------------------

def subsets(xs: Sequence) -> list[frozenset]:
    xs = list(xs)
    return [frozenset(x for i, x in enumerate(xs) if mask >> i & 1) for mask in range(1 << len(xs))]


def dyadic_distributions(points: Sequence, max_support: int = 3, denominator: int = 8) -> list[Dist]:
    """Every distribution on ``points`` with support at most ``max_support``
    and masses that are multiples of ``1/denominator``."""
    out = []
    pts = list(points)

    def compositions(total, parts):
        if parts == 1:
            yield (total,)
            return
        for first in range(1, total - parts + 2):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    for k in range(1, min(max_support, len(pts)) + 1):
        for support in combinations(pts, k):
            for comp in compositions(denominator, k):
                out.append(Dist({x: c / denominator for x, c in zip(support, comp)}))
    return out
