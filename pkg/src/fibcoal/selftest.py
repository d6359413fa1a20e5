"""Seeded self-test suites: lemma instances, naturality, separation,
translation soundness and homomorphism invariance."""
from __future__ import annotations

import random
from functools import partial

from .classical import (
    D, EXP, LTS, P, PD, R, box, classical_signature, classical_structure, deq, detcert, dreq,
    dreq_explicit, dyadic_distributions, kripke_coalgebra, quotient_frame, subsets,
)
from .generate import LABELS, kripke_formula, random_kripke, random_translation_instance
from .semantics.evaluate import Evaluator
from .semantics.properties import (
    PropertyReport, all_functions, check_homomorphism_invariance, check_lifting_naturality,
    check_monotone, check_mutually_surjective_on_singletons, check_nat_naturality,
    check_separates_by_singletons, check_separating, check_translation,
    expr_lifting,
)
from .semantics.structure import NatTrans, apply_morphism
from .semantics.values import Dist, Pair, Table, Tup
from .signature import FibObject
from .syntax.ast import Apply, Conj, Neg, Superscript, Then, Top
from .syntax.parser import parse_morphism

SUITES = ("lemmas", "naturality", "separation", "translation", "invariance")
EIGHTHS = tuple(k / 8 for k in range(9))
SIGMA = (1, 2)


def _deq_family(st, probs=EIGHTHS):
    return [expr_lifting(deq(p), st, f"deq[{p:g}]", D) for p in probs]


def _detcert_family(st, labels=SIGMA):
    return [expr_lifting(detcert(r), st, f"detcert[{r}]", R) for r in labels]


def _random_dyadic(rng: random.Random, points, max_support=3, denominator=8) -> Dist:
    k = rng.randint(1, min(max_support, len(points)))
    support = rng.sample(list(points), k)
    cuts = sorted(rng.sample(range(1, denominator), k - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [denominator])]
    return Dist({x: c / denominator for x, c in zip(support, parts)})


def _random_subset(rng: random.Random, xs) -> frozenset:
    return frozenset(x for x in xs if rng.random() < 0.5)


# -- lemma instances ----------------------------------------------------------------

def lemma_reports(seed: int = 0, samples: int = 1000, max_exhaustive: int = 3,
                  random_size: int = 5) -> list[PropertyReport]:
    """Each lemma instance, exhaustively on carriers up to ``max_exhaustive`` states and on
    ``samples`` seeded random values over a ``random_size``-state carrier."""
    rng = random.Random(seed)
    st = classical_structure(LABELS)
    sig = classical_signature(LABELS)
    deqs = _deq_family(st)
    detcerts = _detcert_family(st)
    dreqs = [expr_lifting(dreq(p, r), st, f"dreq[{p:g},{r}]", D @ R) for p in EIGHTHS for r in SIGMA]
    ev = {a: parse_morphism(f"evd[{a}]", sig) for a in LABELS}
    evsep = [expr_lifting(Superscript(deq(p), ev[a]), st, f"deq[{p:g}]^evd[{a}]", EXP @ D)
             for p in EIGHTHS for a in LABELS]
    pi0, pi1 = parse_morphism("pi[0]", sig), parse_morphism("pi[1]", sig)
    prod = ([expr_lifting(Superscript(box(), pi0), st, "box^pi[0]", PD)]
            + [expr_lifting(Superscript(deq(p), pi1), st, f"deq[{p:g}]^pi[1]", PD) for p in EIGHTHS])
    then_mono = [
        expr_lifting(Then(box(), box()), st, "box ; box", P @ P),
    ] + [expr_lifting(Then(detcert(r), box()), st, f"detcert[{r}] ; box", P @ R) for r in SIGMA]
    ev_a = parse_morphism("ev[a]", sig)
    super_mono = [expr_lifting(Superscript(box(), ev_a), st, "box^ev[a]", LTS)]

    reports = {name: PropertyReport(name) for name in (
        "deq separates by singletons", "detcert monotone", "detcert mutually surjective on singletons",
        "dreq separating (then of detcert and deq)", "dreq matches its closed form",
        "evalsep: deq^evd separating", "prod: box^pi0, deq^pi1 separating",
        "then preserves monotonicity", "superscript preserves monotonicity",
    )}

    def closed_form(states, dists):
        rep = PropertyReport("closed form")
        for d in dists:
            for u in subsets(states):
                for p in EIGHTHS:
                    for r in SIGMA:
                        rep.checked += 1
                        via_then = dreqs[EIGHTHS.index(p) * len(SIGMA) + SIGMA.index(r)]((u,), d)
                        if via_then != dreq_explicit(d, u, p, r):
                            rep.fail(d, sorted(u), p, r)
        return rep

    # exhaustive part
    for n in range(1, max_exhaustive + 1):
        xs = tuple(range(n))
        subs = subsets(xs)
        dists = dyadic_distributions(xs, 3, 8)
        pairs = [Pair(r, x) for r in SIGMA for x in xs]
        pair_dists = dyadic_distributions(pairs, 3, 8)
        reports["deq separates by singletons"].merge(check_separates_by_singletons(deqs, dists, xs))
        reports["detcert monotone"].merge(check_monotone(detcerts, pairs, subs))
        reports["detcert mutually surjective on singletons"].merge(
            check_mutually_surjective_on_singletons(detcerts, pairs, subs))
        reports["dreq separating (then of detcert and deq)"].merge(check_separating(dreqs, pair_dists, subs))
        reports["dreq matches its closed form"].merge(closed_form(xs, pair_dists))
        tables = [Table({"a": d1, "b": d2}) for d1 in dists for d2 in dists]
        reports["evalsep: deq^evd separating"].merge(check_separating(evsep, tables, subs))
        tups = [Tup((s, d)) for s in subs for d in dists]
        reports["prod: box^pi0, deq^pi1 separating"].merge(check_separating(prod, tups, subs))
        pp = subsets(subs)
        pr = subsets(pairs)
        reports["then preserves monotonicity"].merge(check_monotone(then_mono[:1], pp, subs))
        reports["then preserves monotonicity"].merge(check_monotone(then_mono[1:], pr, subs))
        lts_vals = [Table({"a": s, "b": t}) for s in subs for t in subs]
        reports["superscript preserves monotonicity"].merge(check_monotone(super_mono, lts_vals, subs))

    # seeded random part on a larger carrier
    if samples:
        xs = tuple(range(random_size))
        subs = subsets(xs)
        pairs = [Pair(r, x) for r in SIGMA for x in xs]
        dists = [_random_dyadic(rng, xs) for _ in range(samples)]
        pair_dists = [_random_dyadic(rng, pairs) for _ in range(samples)]
        reports["deq separates by singletons"].merge(check_separates_by_singletons(deqs, dists, xs))
        reports["detcert monotone"].merge(check_monotone(detcerts, [rng.choice(pairs) for _ in range(samples)], subs))
        reports["detcert mutually surjective on singletons"].merge(
            check_mutually_surjective_on_singletons(detcerts, pairs, subs))
        singletons = [frozenset([x]) for x in xs] + [frozenset(), frozenset(xs)]
        reports["dreq separating (then of detcert and deq)"].merge(check_separating(dreqs, pair_dists, singletons))
        reports["dreq matches its closed form"].merge(closed_form_sampled(rng, dreqs, pair_dists, xs))
        tables = [Table({"a": _random_dyadic(rng, xs), "b": _random_dyadic(rng, xs)}) for _ in range(samples)]
        reports["evalsep: deq^evd separating"].merge(check_separating(evsep, tables, singletons))
        tups = [Tup((_random_subset(rng, xs), _random_dyadic(rng, xs))) for _ in range(samples)]
        reports["prod: box^pi0, deq^pi1 separating"].merge(check_separating(prod, tups, subs))
        pp = [frozenset(_random_subset(rng, xs) for _ in range(rng.randint(0, 4))) for _ in range(samples)]
        pr = [_random_subset(rng, pairs) for _ in range(samples)]
        reports["then preserves monotonicity"].merge(check_monotone(then_mono[:1], pp, subs))
        reports["then preserves monotonicity"].merge(check_monotone(then_mono[1:], pr, subs))
        lts_vals = [Table({"a": _random_subset(rng, xs), "b": _random_subset(rng, xs)}) for _ in range(samples)]
        reports["superscript preserves monotonicity"].merge(check_monotone(super_mono, lts_vals, subs))
    return list(reports.values())


def closed_form_sampled(rng: random.Random, dreqs, dists, xs) -> PropertyReport:
    rep = PropertyReport("closed form")
    for d in dists:
        u = _random_subset(rng, xs)
        k = rng.randrange(len(dreqs))
        p, r = EIGHTHS[k // len(SIGMA)], SIGMA[k % len(SIGMA)]
        rep.checked += 1
        if dreqs[k]((u,), d) != dreq_explicit(d, u, p, r):
            rep.fail(d, sorted(u), p, r)
    return rep


# -- naturality -----------------------------------------------------------------------

def naturality_reports(seed: int = 0, max_size: int = 3, values_per_carrier: int = 12) -> list[PropertyReport]:
    """Every stock lifting and natural transformation, over all functions between carriers of
    size at most ``max_size``, on a seeded sample of values."""
    rng = random.Random(seed)
    st = classical_structure(LABELS)
    sig = classical_signature(LABELS)
    liftings = [
        (expr_lifting(box(), st, "box", P), P),
        (expr_lifting(deq(0.5), st, "deq[0.5]", D), D),
        (expr_lifting(deq(0.0), st, "deq[0]", D), D),
        (expr_lifting(detcert(1), st, "detcert[1]", R), R),
        (expr_lifting(dreq(0.25, 1), st, "dreq[0.25,1]", D @ R), D @ R),
        (expr_lifting(Then(box(), box()), st, "box ; box", P @ P), P @ P),
    ]
    nats = ["ev[a]", "evd[b]", "swap[a,b]", "supp", "eta", "dirac", "union", "flat", "pi[0]", "pi[1]",
            "[Exp|supp|]", "[P|eta|]"]
    out = {"lifting naturality": PropertyReport("lifting naturality"),
           "natural transformation naturality": PropertyReport("natural transformation naturality")}

    def sample(fibre: FibObject, xs):
        return [_random_value(rng, fibre, xs) for _ in range(values_per_carrier)]

    for nx in range(1, max_size + 1):
        for ny in range(1, max_size + 1):
            xs, ys = tuple(range(nx)), tuple(f"y{i}" for i in range(ny))
            fns = list(all_functions(xs, ys))
            for lam, fibre in liftings:
                out["lifting naturality"].merge(
                    check_lifting_naturality(lam, st, fibre, xs, ys, sample(fibre, xs), fns))
            for text in nats:
                f = parse_morphism(text, sig)
                whole = NatTrans(text, f.source, f.target, partial(apply_morphism, f, st))
                out["natural transformation naturality"].merge(
                    check_nat_naturality(whole, st, xs, ys, sample(f.source, xs), fns))
    return list(out.values())


def _random_value(rng: random.Random, fibre: FibObject, xs):
    word = fibre.word
    if not word:
        return rng.choice(xs)
    head, rest = word[0], FibObject(word[1:])
    if head == "P":
        return frozenset(_random_value(rng, rest, xs) for _ in range(rng.randint(0, 3)))
    if head == "D":
        pts = list(dict.fromkeys(_random_value(rng, rest, xs) for _ in range(rng.randint(1, 3))))
        return _random_dyadic(rng, pts, len(pts), 8)
    if head == "R":
        return Pair(rng.choice(SIGMA), _random_value(rng, rest, xs))
    if head == "Exp":
        return Table({a: _random_value(rng, rest, xs) for a in LABELS})
    if head == "PD":
        return Tup((_random_value(rng, P @ rest, xs), _random_value(rng, D @ rest, xs)))
    raise ValueError(f"cannot sample {fibre}")


# -- translation soundness -----------------------------------------------------------------

def translation_report(seed: int = 0, instances: int = 500) -> PropertyReport:
    rng = random.Random(seed)
    st = classical_structure(LABELS)
    rep = PropertyReport("translation soundness")
    for _ in range(instances):
        phi, f, c = random_translation_instance(rng)
        rep.merge(check_translation(phi, f, st, c))
    return rep


# -- behavioural equivalence ------------------------------------------------------------------

def _any(formulas):
    if not formulas:
        return Neg(Top(P))
    return Neg(Conj(tuple(Neg(f) for f in formulas))) if len(formulas) > 1 else formulas[0]


def depth_representatives(c, st, depth: int = 3, max_atoms: int = 10) -> list:
    """Formulae of modal depth at most ``depth`` covering every subset of ``c``'s carrier
    definable at that depth.

    Level ``k+1`` sets form the boolean algebra generated by level ``k`` sets and the boxes of
    all of them.  Returned are the generators and atoms of every level and all unions of the
    atoms of the last one.
    """
    ev = Evaluator(st, c)
    gens: list = []
    out: list = [Top(P), Neg(Top(P))]
    for level in range(depth + 1):
        blocks = {tuple(ev.holds(g, x) for g in gens) for x in c.carrier}
        atoms = [Conj(tuple(g if bit else Neg(g) for g, bit in zip(gens, key))) if gens else Top(P)
                 for key in sorted(blocks)]
        if len(atoms) > max_atoms:
            raise ValueError(f"{len(atoms)} atoms exceed the enumeration budget")
        unions = [_any([a for i, a in enumerate(atoms) if mask >> i & 1]) for mask in range(1 << len(atoms))]
        out.extend(atoms)
        if level == depth:
            out.extend(unions)
            break
        seen = {ev.extension(g) for g in gens}
        for u in unions:
            b = Apply(box(), (u,))
            ext = ev.extension(b)
            if ext not in seen:
                seen.add(ext)
                gens.append(b)
        out.extend(gens)
    return list(dict.fromkeys(out))


def _disjoint_union(left: dict, right: dict) -> dict:
    frame = {(0, x): frozenset((0, y) for y in ys) for x, ys in left.items()}
    frame.update({(1, x): frozenset((1, y) for y in ys) for x, ys in right.items()})
    return frame


def invariance_report(seed: int = 0, frames: int = 200, max_states: int = 8, depth: int = 3,
                      random_formulas: int = 30) -> PropertyReport:
    """Formulae of depth at most ``depth`` are invariant under the quotient of random frames by
    bisimilarity.  Representatives of every definable set on the disjoint union of a frame and
    its quotient are checked, plus some random formulae."""
    rng = random.Random(seed)
    st = classical_structure(LABELS)
    rep = PropertyReport("bisimulation quotient invariance")
    for _ in range(frames):
        frame = random_kripke(rng, max_states)
        quotient, h = quotient_frame(frame)
        c1, c2 = kripke_coalgebra(frame), kripke_coalgebra(quotient)
        both = kripke_coalgebra(_disjoint_union(frame, quotient))
        formulas = depth_representatives(both, st, depth)
        formulas += [kripke_formula(rng, depth) for _ in range(random_formulas)]
        for phi in formulas:
            rep.checked += 1
            if not check_homomorphism_invariance(phi, st, c1, c2, h.__getitem__):
                rep.fail(frame, phi)
    return rep


# -- quantum separation ----------------------------------------------------------------------

def quantum_separation_report() -> PropertyReport:
    """In a 1-qubit model on the six Pauli eigenstates, every two distinct states are
    separated by some ``qdeq[p, r, A]`` at a singleton."""
    from .quantum.linalg import GATES, ket
    from .quantum.logic import qdeq_modality, quantum_structure
    from .quantum.model import QuantumModel

    states = {name: ket(name) for name in ("0", "1", "+", "-", "i", "j")}
    qm = QuantumModel(1, states, observables={k: GATES[k] for k in ("X", "Y", "Z")}).close()
    st = quantum_structure(qm)
    family = [expr_lifting(qdeq_modality(qm, p, r, a), st, f"qdeq[{p:g},{r:g},{a}]")
              for p in (0.0, 0.5, 1.0) for r in (1.0, -1.0) for a in ("X", "Y", "Z")]
    c = qm.coalgebra()
    values = {x: c(x) for x in c.carrier}
    rep = PropertyReport("quantum qdeq separation by singletons")
    tests = [(lam, frozenset([u])) for lam in family for u in c.carrier]
    sigs = {x: tuple(lam((u,), values[x]) for lam, u in tests) for x in c.carrier}
    for i, x in enumerate(c.carrier):
        for y in c.carrier[i + 1:]:
            rep.checked += 1
            if sigs[x] == sigs[y]:
                rep.fail(x, y)
    return rep


def run_suite(name: str, seed: int = 0) -> list[PropertyReport]:
    if name == "lemmas":
        return lemma_reports(seed)
    if name == "naturality":
        return naturality_reports(seed)
    if name == "separation":
        return [quantum_separation_report()]
    if name == "translation":
        return [translation_report(seed)]
    if name == "invariance":
        return [invariance_report(seed)]
    raise ValueError(f"unknown suite {name!r}; expected one of {SUITES}")


__all__ = ["SUITES", "run_suite"]
