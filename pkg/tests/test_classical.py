import random
from math import comb

import pytest

from fibcoal.classical import (
    P, bisimulation_classes, classical_signature, classical_structure, dreq_explicit, dyadic_distributions, kripke_coalgebra, lts_coalgebra,
    quotient_frame, subsets,
)
from fibcoal.generate import random_kripke, random_lts
from fibcoal.semantics.evaluate import eval_formula, eval_lifting
from fibcoal.semantics.properties import check_homomorphism
from fibcoal.semantics.structure import apply_morphism
from fibcoal.semantics.values import Dist, Pair, Table, Tup
from fibcoal.syntax.parser import parse_formula, parse_modality, parse_morphism
from fibcoal.syntax.typing import elaborate

from oracles import lts_eval, lts_text, naive_bisimilarity, random_lts_formula


def lift(text, sig, st, subset, value):
    return eval_lifting(parse_modality(text, sig), st, (frozenset(subset),), value)


class TestLiftings:
    def test_box(self, sig, st):
        assert lift("box", sig, st, {1, 2}, frozenset({1}))
        assert lift("box", sig, st, set(), frozenset())
        assert not lift("box", sig, st, {1}, frozenset({1, 3}))

    def test_deq_is_exact_mass(self, sig, st):
        d = Dist({0: 0.25, 1: 0.25, 2: 0.5})
        assert lift("deq[0.5]", sig, st, {0, 1}, d)
        assert not lift("deq[0.5]", sig, st, {0}, d)
        assert lift("deq[0]", sig, st, set(), d)

    def test_deq_tolerance(self, sig, st):
        d = Dist({0: 1 / 3, 1: 2 / 3})
        assert lift("deq[0.333333333333]", sig, st, {0}, d)
        assert not lift("deq[0.3333]", sig, st, {0}, d)

    def test_detcert(self, sig, st):
        assert lift("detcert[1]", sig, st, {"x"}, Pair(1, "x"))
        assert not lift("detcert[1]", sig, st, {"x"}, Pair(2, "x"))
        assert not lift("detcert[1]", sig, st, {"y"}, Pair(1, "x"))

    @pytest.mark.parametrize("p,r", [(0.0, 1), (0.25, 1), (0.5, 2), (1.0, 2)])
    def test_dreq_closed_form(self, sig, st, p, r):
        pts = [Pair(s, x) for s in (1, 2) for x in range(2)]
        for d in dyadic_distributions(pts, 3, 4):
            for u in subsets(range(2)):
                expected = abs(sum(m for pt, m in d.items() if pt.label == r and pt.inner in u) - p) <= 1e-9
                assert lift(f"dreq[{p}, {r}]", sig, st, u, d) == expected
                assert dreq_explicit(d, u, p, r) == expected


class TestNaturalTransformations:
    def test_eval_and_swap(self, sig, st):
        t = Table({"a": frozenset({1}), "b": frozenset({2})})
        assert apply_morphism(parse_morphism("ev[a]", sig), st, t) == {1}
        swapped = apply_morphism(parse_morphism("swap[a,b]", sig), st, t)
        assert swapped["a"] == {2} and swapped["b"] == {1}

    def test_support_unit_union(self, sig, st):
        d = Dist({0: 0.5, 1: 0.5})
        assert apply_morphism(parse_morphism("supp", sig), st, d) == {0, 1}
        assert apply_morphism(parse_morphism("[P|eta|]", sig), st, frozenset({0})) == {frozenset({0})}
        pp = frozenset({frozenset({0}), frozenset({1, 2})})
        assert apply_morphism(parse_morphism("union", sig), st, pp) == {0, 1, 2}

    def test_dirac_and_flatten(self, sig, st):
        assert apply_morphism(parse_morphism("[D|dirac|]", sig), st, Dist({0: 1.0})) == Dist({Dist({0: 1.0}): 1.0})
        dd = Dist({Dist({0: 1.0}): 0.5, Dist({0: 0.5, 1: 0.5}): 0.5})
        assert apply_morphism(parse_morphism("flat", sig), st, dd) == Dist({0: 0.75, 1: 0.25})

    def test_projections(self, sig, st):
        v = Tup((frozenset({0}), Dist({1: 1.0})))
        assert apply_morphism(parse_morphism("pi[0]", sig), st, v) == {0}
        assert apply_morphism(parse_morphism("pi[1]", sig), st, v) == Dist({1: 1.0})

    def test_evd_whiskered(self, sig, st):
        t = Table({"a": Dist({0: 0.5, 1: 0.5}), "b": Dist({0: 1.0})})
        supp_a = apply_morphism(parse_morphism("ev[a] . [Exp|supp|]", sig), st, t)
        assert supp_a == {0, 1}
        assert supp_a == apply_morphism(parse_morphism("supp . evd[a]", sig), st, t)

    def test_bad_parameters(self, sig):
        with pytest.raises(Exception):
            parse_morphism("ev[c]", sig)
        with pytest.raises(Exception):
            parse_morphism("pi[2]", sig)


class TestBisimulation:
    def test_matches_naive_oracle(self):
        rng = random.Random(7)
        for _ in range(80):
            frame = random_kripke(rng, 7)
            cls = bisimulation_classes(frame)
            rel = naive_bisimilarity(frame)
            for x in frame:
                for y in frame:
                    assert (cls[x] == cls[y]) == ((x, y) in rel)

    def test_quotient_is_homomorphism(self, st):
        rng = random.Random(8)
        for _ in range(50):
            frame = random_kripke(rng, 8)
            quotient, h = quotient_frame(frame)
            check_homomorphism(st, kripke_coalgebra(frame), kripke_coalgebra(quotient), h.__getitem__)

    def test_chain_collapses(self):
        quotient, h = quotient_frame({0: [1], 1: [1], 2: [2]})
        assert len(quotient) == 1 and len(set(h.values())) == 1


class TestEnumeration:
    def test_subsets(self):
        assert len(subsets(range(4))) == 16
        assert frozenset() in subsets("ab")

    def test_dyadic_distributions(self):
        ds = dyadic_distributions(range(3), 3, 8)
        assert len(ds) == len(set(ds))
        # compositions of 8 into k positive parts on each k-subset
        assert len(ds) == sum(comb(3, k) * comb(7, k - 1) for k in (1, 2, 3))
        assert all(abs(sum(p for _, p in d.items()) - 1) < 1e-12 for d in ds)


def test_lts_box_matches_direct_evaluator(sig, st):
    rng = random.Random(11)
    for _ in range(30):
        trans, labels = random_lts(rng)
        s, structure = classical_signature(labels), classical_structure(labels)
        c = lts_coalgebra(trans, labels)
        for _ in range(5):
            f = random_lts_formula(rng, labels, 3)
            phi = elaborate(parse_formula(lts_text(f), s), s, c.fibre)
            assert eval_formula(phi, structure, c) == lts_eval(f, trans)


def test_kripke_deadlock(sig, st):
    c = kripke_coalgebra({"a": ["b"], "b": []})
    assert eval_formula(elaborate(parse_formula("box(F)", sig), sig, P), st, c) == {"b"}
