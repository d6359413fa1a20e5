"""Seeded random instances over the classical backend: coalgebras, morphisms
and well-typed formulae, for property checks."""
from __future__ import annotations

import random
from functools import lru_cache
from typing import Sequence

from .classical import D, EXP, LTS, P, PD, box, classical_signature, deq, dreq
from .semantics.evaluate import Coalgebra
from .semantics.values import Dist, Pair, Table, Tup
from .signature import FibMorphism, FibObject
from .syntax.ast import (
    Adapt, Apply, Conj, Formula, MConj, MNeg, ModalityExpr, Neg, Superscript, Then, Top, Weaken,
)
from .syntax.parser import parse_morphism

LABELS = ("a", "b")
PP = P @ P
EXPD = EXP @ D
DD = D @ D
DR = D @ FibObject.of("R")
PROBS = (0.0, 0.25, 0.5, 0.75, 1.0)

# morphisms between the fibres we can build coalgebras for, written in the surface syntax
MORPHISMS = (
    "id@P", "id@Exp*P", "id@D", "id@P*P", "id@Exp*D", "id@PD",
    "ev[a]", "ev[b]", "swap[a,b]", "ev[a] . swap[a,b]", "ev[b] . swap[a,b] . swap[a,b]",
    "supp", "[P|eta|]", "[D|dirac|]", "union", "union . [P|eta|]", "id@D*D", "flat",
    "evd[a]", "evd[b]", "supp . evd[a]", "ev[a] . [Exp|supp|]",
    "pi[0]", "pi[1]", "supp . pi[1]", "[P|eta|] . pi[0]",
)


@lru_cache(maxsize=None)
def morphism_table() -> dict[FibObject, tuple[FibMorphism, ...]]:
    """Every catalogued morphism, keyed by its source fibre."""
    sig = classical_signature(LABELS)
    out: dict[FibObject, list] = {}
    for text in MORPHISMS:
        f = parse_morphism(text, sig)
        out.setdefault(f.source, []).append(f)
    return {k: tuple(v) for k, v in out.items()}


FIBRES = (P, LTS, D, PP, EXPD, PD, DD)


def _dyadic(rng: random.Random, points: Sequence, max_support: int = 3, denominator: int = 4) -> Dist:
    k = rng.randint(1, min(max_support, len(points), denominator))
    support = rng.sample(list(points), k)
    cuts = sorted(rng.sample(range(1, denominator), k - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [denominator])]
    return Dist({x: c / denominator for x, c in zip(support, parts)})


def _subset(rng: random.Random, xs: Sequence, p: float = 0.4) -> frozenset:
    return frozenset(x for x in xs if rng.random() < p)


def random_value(rng: random.Random, fibre: FibObject, states: Sequence):
    """A random element of ``[[fibre]](states)``."""
    if fibre == P:
        return _subset(rng, states)
    if fibre == LTS:
        return Table({a: _subset(rng, states) for a in LABELS})
    if fibre == D:
        return _dyadic(rng, states)
    if fibre == PP:
        return frozenset(_subset(rng, states) for _ in range(rng.randint(0, 3)))
    if fibre == EXPD:
        return Table({a: _dyadic(rng, states) for a in LABELS})
    if fibre == PD:
        return Tup((_subset(rng, states), _dyadic(rng, states)))
    if fibre == DD:
        return Dist([(_dyadic(rng, states), 0.5), (_dyadic(rng, states), 0.5)])
    if fibre == DR:
        points = [Pair(r, x) for r in (1, 2) for x in states]
        return _dyadic(rng, points)
    raise ValueError(f"no generator for fibre {fibre}")


def random_coalgebra(rng: random.Random, fibre: FibObject, size: int | None = None) -> Coalgebra:
    n = size or rng.randint(1, 4)
    states = tuple(range(n))
    return Coalgebra(states, {x: random_value(rng, fibre, states) for x in states}, fibre)


def random_kripke(rng: random.Random, max_states: int = 8, density: float | None = None) -> dict:
    n = rng.randint(1, max_states)
    p = rng.uniform(0.1, 0.5) if density is None else density
    return {x: frozenset(y for y in range(n) if rng.random() < p) for x in range(n)}


def random_lts(rng: random.Random, max_states: int = 6, max_labels: int = 3) -> tuple[dict, tuple]:
    n = rng.randint(1, max_states)
    labels = tuple("abc"[: rng.randint(1, max_labels)])
    p = rng.uniform(0.1, 0.5)
    return ({x: {a: [y for y in range(n) if rng.random() < p] for a in labels} for x in range(n)},
            labels)


# -- modality expressions and formulae -----------------------------------------

def _base_modality(rng: random.Random, fibre: FibObject) -> ModalityExpr | None:
    if fibre == P:
        return box()
    if fibre == D:
        return deq(rng.choice(PROBS))
    if fibre == PP:
        return Then(box(), box())
    if fibre == DD:
        return Then(deq(rng.choice(PROBS)), deq(rng.choice(PROBS)))
    if fibre == DR:
        return dreq(rng.choice(PROBS), rng.choice((1, 2)))
    return None


def random_modality(rng: random.Random, fibre: FibObject, depth: int = 2) -> ModalityExpr:
    """A unary modality expression typed at ``fibre``."""
    base = _base_modality(rng, fibre)
    morphs = [f for f in morphism_table().get(fibre, ()) if not f.is_identity]
    if depth <= 0 and base is None:
        # out of budget: step straight to a fibre with a base modality
        morphs = [f for f in morphs if _base_modality(rng, f.target) is not None]
    choices = []
    if base is not None:
        choices += ["base"] * 3
    if morphs:
        choices += ["super"] * 3
    if depth > 0:
        choices += ["neg", "conj"]
    pick = rng.choice(choices)
    if pick == "base":
        return base
    if pick == "super":
        f = rng.choice(morphs)
        return Superscript(random_modality(rng, f.target, depth - 1), f)
    if pick == "neg":
        return MNeg(random_modality(rng, fibre, depth - 1))
    return MConj((random_modality(rng, fibre, depth - 1), random_modality(rng, fibre, depth - 1)))


def random_formula(rng: random.Random, fibre: FibObject, depth: int = 3, size: int = 8) -> Formula:
    """A well-typed formula at ``fibre``, with adaptations, of modal depth at most ``depth``.

    ``size`` bounds the number of boolean and adaptation nodes on any branch.
    """
    choices = ["top"]
    if depth > 0:
        choices += ["apply"] * 4 + ["binary"]
    if size > 0:
        choices += ["neg", "conj", "adapt"]
    pick = rng.choice(choices)
    if pick == "top" or (pick in ("neg", "conj", "adapt") and rng.random() < 0.3):
        return Top(fibre)
    if pick == "neg":
        return Neg(random_formula(rng, fibre, depth, size - 1))
    if pick == "conj":
        return Conj((random_formula(rng, fibre, depth, size - 1), random_formula(rng, fibre, depth, size - 1)))
    if pick == "adapt":
        f = rng.choice(morphism_table()[fibre])
        return Adapt(f, random_formula(rng, f.target, depth, size - 1))
    if pick == "binary":
        m = MConj((Weaken(random_modality(rng, fibre), 2, 0), Weaken(random_modality(rng, fibre), 2, 1)))
        return Apply(m, (random_formula(rng, fibre, depth - 1, size), random_formula(rng, fibre, depth - 1, size)))
    return Apply(random_modality(rng, fibre), (random_formula(rng, fibre, depth - 1, size),))


def random_translation_instance(rng: random.Random):
    """``(phi, f, coalgebra)`` with ``f : A -> B``, ``phi : B`` and the coalgebra at ``A``."""
    a = rng.choice(FIBRES)
    f = rng.choice(morphism_table()[a])
    phi = random_formula(rng, f.target, rng.randint(0, 3))
    return phi, f, random_coalgebra(rng, a)


def kripke_formula(rng: random.Random, depth: int = 3, size: int = 4) -> Formula:
    """A random formula over the plain Kripke fibre, of modal depth at most ``depth``."""
    pick = rng.choice(["top"] + (["neg", "conj"] if size > 0 else []) + (["box"] * 3 if depth > 0 else []))
    if pick == "top":
        return Top(P)
    if pick == "neg":
        return Neg(kripke_formula(rng, depth, size - 1))
    if pick == "conj":
        return Conj((kripke_formula(rng, depth, size - 1), kripke_formula(rng, depth, size - 1)))
    return Apply(box(), (kripke_formula(rng, depth - 1, size),))
