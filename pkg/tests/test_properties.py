import random

import pytest

from fibcoal.classical import D, P, box, classical_structure, deq, dyadic_distributions, kripke_coalgebra, subsets
from fibcoal.semantics.properties import (
    HomomorphismError, PropertyReport, check_homomorphism, check_homomorphism_invariance,
    check_lifting_naturality, check_monotone, check_mutually_surjective_on_singletons,
    check_nat_naturality, check_property, check_separates_by_singletons,
    check_superscript_separating, check_then_separating, check_translation, expr_lifting,
)
from fibcoal.semantics.structure import Lifting, NatTrans
from fibcoal.semantics.values import Dist, Pair
from fibcoal.syntax.parser import parse_formula, parse_morphism
from fibcoal.syntax.typing import elaborate

XS = (0, 1, 2)


@pytest.fixture(scope="module")
def deqs():
    st = classical_structure()
    return [expr_lifting(deq(k / 8), st, f"deq[{k}/8]", D) for k in range(9)]


def test_deq_family_separates_by_singletons(deqs):
    rep = check_separates_by_singletons(deqs, dyadic_distributions(XS, 3, 8), XS)
    assert rep.ok and rep.checked == len(dyadic_distributions(XS, 3, 8))


def test_too_coarse_family_is_caught(deqs):
    # only the 1/2 threshold cannot tell a 1/4 mass from a 3/4 mass
    rep = check_separates_by_singletons(deqs[4:5], dyadic_distributions(XS, 3, 8), XS)
    assert not rep.ok and rep.counterexamples


def test_non_monotone_lifting_is_caught():
    st = classical_structure()
    nonmono = Lifting("empty", 1, P, lambda args, v: not args[0])
    assert not check_monotone([nonmono], [frozenset({0})], subsets(XS)).ok
    assert check_monotone([expr_lifting(box(), st)], subsets(XS), subsets(XS)).ok


def test_mutual_surjectivity():
    detcert = Lifting("dc", 1, P, lambda args, v: v.label == 1 and v.inner in args[0])
    universe = [Pair(1, x) for x in XS]
    assert check_mutually_surjective_on_singletons([detcert], universe, subsets(XS)).ok
    assert not check_mutually_surjective_on_singletons([detcert], universe + [Pair(2, 0)], subsets(XS)).ok


def test_then_and_superscript_separation(deqs):
    detcert = [Lifting(f"dc{r}", 1, P, lambda args, v, r=r: v.label == r and v.inner in args[0]) for r in (1, 2)]
    pts = [Pair(r, x) for r in (1, 2) for x in (0, 1)]
    values = dyadic_distributions(pts, 2, 4)
    assert check_then_separating(detcert, deqs, values, subsets((0, 1))).ok
    assert not check_then_separating(detcert[:1], deqs, values, subsets((0, 1))).ok
    support = ("supp", lambda d: d.support)
    boxes = [Lifting("box", 1, P, lambda args, v: v <= args[0])]
    assert not check_superscript_separating(boxes, [support], dyadic_distributions(XS, 2, 4), subsets(XS)).ok


def test_naturality(st):
    good = expr_lifting(box(), st, "box", P)
    assert check_lifting_naturality(good, st, P, XS, ("a", "b"), subsets(XS)).ok
    size_two = Lifting("bad", 1, P, lambda args, v: len(args[0]) == 2)
    assert not check_lifting_naturality(size_two, st, P, XS, ("a", "b"), subsets(XS)).ok


def test_nat_naturality(sig, st):
    from fibcoal.semantics.structure import apply_morphism

    supp = parse_morphism("supp", sig)
    n = NatTrans("supp", supp.source, supp.target, lambda v: apply_morphism(supp, st, v))
    values = dyadic_distributions(XS, 2, 4)
    assert check_nat_naturality(n, st, XS, ("a", "b"), values).ok
    first = NatTrans("first", D, P, lambda d: frozenset([min(d.support, key=repr)]))
    assert not check_nat_naturality(first, st, XS, ("b", "a"), values).ok


def test_translation_check(sig, st):
    rng = random.Random(0)
    from fibcoal.generate import random_translation_instance

    for _ in range(20):
        phi, f, c = random_translation_instance(rng)
        assert check_translation(phi, f, st, c).ok


def test_homomorphism_checks(sig, st):
    c1 = kripke_coalgebra({0: [1], 1: [1], 2: []})
    c2 = kripke_coalgebra({"x": ["x"], "d": []})
    h = {0: "x", 1: "x", 2: "d"}.__getitem__
    check_homomorphism(st, c1, c2, h)
    phi = elaborate(parse_formula("box(box(F))", sig), sig, P)
    assert check_homomorphism_invariance(phi, st, c1, c2, h)
    with pytest.raises(HomomorphismError):
        check_homomorphism(st, c1, c2, lambda x: "x")
    with pytest.raises(HomomorphismError):
        check_homomorphism(st, c1, c2, lambda x: "nowhere")


def test_dispatcher(deqs):
    rep = check_property("separates_by_singletons", family=deqs, values=[Dist({0: 1.0})], carrier=XS)
    assert rep.ok
    with pytest.raises(ValueError):
        check_property("commutes")


def test_report_merge_keeps_bounded_examples():
    a, b = PropertyReport("k", keep=2), PropertyReport("k")
    for i in range(5):
        b.fail(i)
    b.checked = 5
    a.merge(b)
    assert a.failures == 5 and a.checked == 5 and len(a.counterexamples) == 2
    assert "5 counterexample" in str(a)
