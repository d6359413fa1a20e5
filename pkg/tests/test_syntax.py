import random

import pytest
from hypothesis import given, settings, strategies as hst

from fibcoal.classical import D, LTS, P, R, box, dreq
from fibcoal.generate import FIBRES, random_formula, random_modality
from fibcoal.signature import FibMorphism
from fibcoal.syntax.ast import Adapt, Apply, Conj, Neg, Superscript, Then, Top, implies, modal_depth
from fibcoal.syntax.parser import (
    ParseError, format_formula, format_modality, parse_formula, parse_modality, parse_morphism,
)
from fibcoal.syntax.translate import eliminate_adaptations, translate
from fibcoal.syntax.typing import TypingError, elaborate, type_of_formula, type_of_modality


def typed(text, sig, expected=None):
    return type_of_formula(elaborate(parse_formula(text, sig), sig, expected), sig)


class TestParser:
    def test_box_of_false(self, sig):
        phi = parse_formula("box(F)", sig)
        assert phi == Apply(box(), (Neg(Top()),))

    def test_implication_desugars(self, sig):
        assert parse_formula("T -> F", sig) == implies(Top(), Neg(Top()))

    def test_macro_expands(self, sig):
        assert parse_formula("dreq[0.5, 1](T)", sig) == Apply(dreq(0.5, 1), (Top(),))

    def test_superscript_and_then(self, sig):
        m = parse_modality("(box ; box)^ev[a]", sig)
        assert m == Superscript(Then(box(), box()), parse_morphism("ev[a]", sig))

    def test_adaptation(self, sig):
        phi = parse_formula("ev[a](box(T))", sig)
        assert isinstance(phi, Adapt) and phi.morphism == parse_morphism("ev[a]", sig)

    def test_composite_adaptation(self, sig):
        phi = parse_formula("{ev[a] . swap[a,b]}(box(T))", sig)
        assert phi.morphism.source == LTS

    @pytest.mark.parametrize("text", ["box(T", "box(T))", "&()", "deq[](T)", "box(T) &", "T@"])
    def test_syntax_errors_have_positions(self, sig, text):
        with pytest.raises(ParseError, match="line 1, column"):
            parse_formula(text, sig)

    def test_unknown_name(self, sig):
        with pytest.raises(ParseError):
            parse_formula("diamond(T)", sig)

    def test_multiline_position(self, sig):
        with pytest.raises(ParseError, match="line 2"):
            parse_formula("box(T) &\n  )", sig)

    @pytest.mark.parametrize("text", [
        "box(F)", "!box(!T) & box(T)", "<box^ev[a]>(T@P)", "<(detcert[1] ; deq[0.25])>(T)",
        "<(box & ~box)>(T)", "{supp . evd[a]}(box(T))", "<deq[0.5]^flat>(T)",
    ])
    def test_round_trip(self, sig, text):
        phi = parse_formula(text, sig)
        assert parse_formula(format_formula(phi), sig) == phi

    @settings(max_examples=150, deadline=None)
    @given(hst.integers(0, 10**9))
    def test_round_trip_random(self, sig, seed):
        rng = random.Random(seed)
        phi = random_formula(rng, rng.choice(FIBRES), 3)
        assert parse_formula(format_formula(phi), sig) == phi

    @settings(max_examples=100, deadline=None)
    @given(hst.integers(0, 10**9))
    def test_modality_round_trip_random(self, sig, seed):
        rng = random.Random(seed)
        m = random_modality(rng, rng.choice(FIBRES))
        assert parse_modality(format_modality(m), sig) == m


class TestTyping:
    def test_fibres(self, sig):
        assert typed("box(T)", sig) == P
        assert typed("ev[a](box(T))", sig) == LTS
        assert typed("deq[0.5](T)", sig) == D
        assert typed("dreq[0.5, 1](T)", sig) == D @ R

    def test_top_takes_context(self, sig):
        assert typed("T", sig, D) == D

    def test_argument_mismatch(self, sig):
        with pytest.raises(TypingError):
            typed("deq[0.5](box(T))", sig)

    def test_conjunction_mismatch(self, sig):
        with pytest.raises(TypingError):
            typed("box(T) & deq[0.5](T)", sig)

    def test_superscript_mismatch(self, sig):
        with pytest.raises(TypingError):
            type_of_modality(parse_modality("deq[0.5]^supp", sig), sig)

    def test_then_needs_unary_second(self, sig):
        with pytest.raises(TypingError):
            type_of_modality(Then(box(), parse_modality("top", sig)), sig)

    def test_expected_fibre(self, sig):
        with pytest.raises(TypingError):
            elaborate(parse_formula("box(T)", sig), sig, D)

    @settings(max_examples=100, deadline=None)
    @given(hst.integers(0, 10**9))
    def test_generated_formulas_type(self, sig, seed):
        rng = random.Random(seed)
        fibre = rng.choice(FIBRES)
        assert type_of_formula(random_formula(rng, fibre, 3), sig) == fibre


class TestTranslation:
    def test_identity_leaves_modalities(self, sig):
        phi = elaborate(parse_formula("box(box(T))", sig), sig)
        assert translate(FibMorphism.identity(P), phi) == phi

    def test_pushes_superscripts(self, sig):
        f = parse_morphism("ev[a]", sig)
        phi = elaborate(parse_formula("box(T)", sig), sig)
        assert translate(f, phi) == Apply(Superscript(box(), f), (Top(LTS),))

    def test_adaptations_compose(self, sig):
        f, g = parse_morphism("evd[a]", sig), parse_morphism("supp", sig)
        inner = elaborate(parse_formula("box(T)", sig), sig)
        out = eliminate_adaptations(Adapt(f, Adapt(g, inner)), sig)
        assert out == Apply(Superscript(box(), parse_morphism("supp . evd[a]", sig)), (Top(f.source),))

    def test_result_has_no_adaptations_and_keeps_depth(self, sig):
        rng = random.Random(3)
        for _ in range(50):
            phi = random_formula(rng, rng.choice(FIBRES), 3)
            out = eliminate_adaptations(phi, sig)
            assert "Adapt(" not in repr(out)
            assert modal_depth(out) == modal_depth(phi)

    def test_type_checked_when_signature_given(self, sig):
        phi = elaborate(parse_formula("box(T)", sig), sig)
        with pytest.raises(TypingError):
            translate(parse_morphism("evd[a]", sig), phi, sig)

    def test_conjunction_distributes(self, sig):
        f = parse_morphism("supp", sig)
        phi = Conj((Top(P), Neg(Top(P))))
        assert translate(f, phi) == Conj((Top(D), Neg(Top(D))))
