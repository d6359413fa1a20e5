import pytest

from fibcoal.classical import LTS, P
from fibcoal.modelfile import ModelFileError, load_model, parse_model


def test_shipped_models_load(models_dir):
    for path in sorted(models_dir.glob("*.yaml")):
        m = load_model(path)
        assert m.source == str(path) and m.initial


def test_kripke():
    m = parse_model("kind: kripke\ntransitions: {x: [y], y: []}\n")
    assert m.coalgebra.fibre == P and m.initial == ("x", "y")
    assert m.coalgebra("x") == {"y"}


def test_lts():
    m = parse_model("kind: lts\nlabels: [a]\ntransitions: {x: {a: [x]}, y: }\ninitial: [y]\n")
    assert m.coalgebra.fibre == LTS and m.initial == ("y",)
    assert m.coalgebra("y")["a"] == frozenset()


def test_markov_and_tolerance_override():
    m = parse_model("kind: markov\ntransitions: {x: {x: 0.5, y: 0.5}, y: {y: 1}}\n", tolerance=1e-6)
    assert m.tolerance == 1e-6
    assert m.coalgebra("x")["y"] == 0.5


def test_quantum_literals_and_expressions():
    text = """
kind: quantum
qubits: 1
states: {zero: [1, 0], plus: "(ket('0') + ket('1')) / sqrt(2)", i: ["0.7071067811865476", "0.7071067811865476j"]}
observables: {Z: Z, P0: [[1, 0], [0, 0]]}
unitaries: {H: H}
constants: {half: 0.5}
morphisms: {Q: "ev[Z]"}
initial: [plus]
"""
    m = parse_model(text)
    assert m.quantum.carrier == ("zero", "plus", "i")
    assert m.signature.constants["half"] == 0.5
    assert "Q" in m.signature.morphism_aliases


@pytest.mark.parametrize("text,match", [
    ("- 1\n- 2\n", "mapping"),
    ("kind: petri\n", "unknown model kind"),
    ("kind: kripke\ntransitions: {x: [z]}\n", "undeclared state"),
    ("kind: kripke\ntransitions: {}\n", "nonempty"),
    ("kind: kripke\ntransitions: {x: []}\ninitial: [q]\n", "not in the carrier"),
    ("kind: lts\ntransitions: {x: {}}\n", "labels"),
    ("kind: lts\nlabels: [a]\ntransitions: {x: {b: [x]}}\n", "undeclared labels"),
    ("kind: markov\ntransitions: {x: {x: 0.5}}\n", "sums to"),
    ("kind: quantum\nstates: {}\n", "qubits"),
    ("kind: quantum\nqubits: 1\nstates: {a: \"ket('q')\"}\n", "unknown single-qubit"),
    ("kind: quantum\nqubits: 1\nstates: {a: [1, 0]}\nobservables: {A: [[0, 1], [0, 0]]}\n", "Hermitian"),
    ("kind: quantum\nqubits: 1\nstates: {a: [2, 0]}\n", "norm"),
    ("kind: kripke\ntransitions: {x: [y]\n", "YAML"),
])
def test_errors(text, match):
    with pytest.raises(ModelFileError, match=match):
        parse_model(text)
