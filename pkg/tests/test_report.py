import json

import pytest

from fibcoal.modelfile import parse_model
from fibcoal.report import check, read_formulas, reports_json
from fibcoal.syntax.typing import TypingError

KRIPKE = "kind: kripke\ntransitions: {a: [b], b: [], c: [c]}\ninitial: [a, c]\n"


def test_deadlocks():
    r = check(parse_model(KRIPKE), "box(F)")
    assert r.satisfying == ["b"] and r.verdicts == {"a": False, "b": True, "c": False}
    assert not r.holds and r.type == "P" and r.carrier_size == 3


def test_state_override():
    assert check(parse_model(KRIPKE), "box(F)", states=["b"]).holds


def test_typing_error():
    with pytest.raises(TypingError):
        check(parse_model(KRIPKE), "deq[0.5](T)")


def test_render_and_json_are_reproducible():
    model = parse_model(KRIPKE)
    a = [check(model, "!box(F)", name="live")]
    b = [check(model, "!box(F)", name="live")]
    assert reports_json(a) == reports_json(b)
    doc = json.loads(reports_json(a, seed=1))
    assert doc["seed"] == 1 and "seconds" not in doc["reports"][0]
    assert "seconds" in json.loads(reports_json(a, timing=True))["reports"][0]
    text = a[0].render()
    assert "[live]" in text and "result: HOLDS" in text


def test_read_formulas():
    text = "# comment\n\n@one\nbox(F)\n@two\n  !box(F)\n  & T\n"
    assert read_formulas(text) == {"one": "box(F)", "two": "  !box(F)\n  & T"}
    assert read_formulas("box(T)") == {"formula": "box(T)"}
    with pytest.raises(ValueError):
        read_formulas("@x\nT\n@x\nT\n")
