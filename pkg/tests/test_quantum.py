import numpy as np
import pytest

from fibcoal.modelfile import quantum_model
from fibcoal.quantum.linalg import GATES, LinalgError, bell_observable, bell_state, ket, kron
from fibcoal.quantum.logic import (
    polyadic_measure_modality, projcert_modality, qdeq_explicit, qdeq_lifting, quantum_fibre,
)
from fibcoal.quantum.model import ClosureError, Observable, QuantumModel, close_carrier
from fibcoal.report import check, prepare
from fibcoal.semantics.values import Pair
from fibcoal.syntax.parser import ParseError
from fibcoal.syntax.typing import TypingError

PAULI = {k: GATES[k] for k in "XYZ"}


def one_qubit(**kw):
    states = {name: ket(name) for name in ("0", "1", "+", "-", "i", "j")}
    obs = dict(PAULI, P0=np.diag([1, 0]), P1=np.diag([0, 1]), Pplus=np.full((2, 2), 0.5))
    return QuantumModel(1, states, obs, {"H": GATES["H"], "X": GATES["X"]}, **kw)


def holds(qm, text, state):
    return check(quantum_model(qm), text, states=[state]).holds


class TestModel:
    def test_born_rule(self):
        qm = one_qubit()
        d = qm.measurement_distribution("+", "Z")
        assert d[Pair(1.0, "0")] == pytest.approx(0.5)
        assert d[Pair(-1.0, "1")] == pytest.approx(0.5)

    def test_zero_outcomes_dropped(self):
        d = one_qubit().measurement_distribution("0", "Z")
        assert len(d) == 1 and d[Pair(1.0, "0")] == pytest.approx(1.0)

    def test_successors_interned_up_to_phase(self):
        qm = QuantumModel(1, {"m": -ket("-")}, PAULI)
        d = qm.measurement_distribution("m", "Z")
        assert set(qm.carrier) == {"m", "s1", "s2"}
        d2 = qm.measurement_distribution("m", "Z")
        assert d == d2 and len(qm.carrier) == 3

    def test_frozen_model_refuses_new_states(self):
        qm = QuantumModel(1, {"+": ket("+")}, PAULI).close()
        with pytest.raises(ClosureError):
            qm.measurement_distribution("+", "Z")

    def test_budget(self):
        qm = QuantumModel(1, {"+": ket("+")}, PAULI, max_states=2)
        with pytest.raises(ClosureError):
            qm.measurement_distribution("+", "Z")

    def test_validation(self):
        with pytest.raises(ValueError):
            QuantumModel(1, {"a": ket("0"), "b": -ket("0")})
        with pytest.raises(ValueError):
            QuantumModel(1, {"a": np.array([1, 1])})
        with pytest.raises(LinalgError):
            QuantumModel(1, {"a": ket("0")}, {"bad": np.array([[0, 1], [0, 0]])})
        with pytest.raises(LinalgError):
            QuantumModel(1, {"a": ket("0")}, unitaries={"bad": np.eye(2) * 2})
        with pytest.raises(ValueError):
            QuantumModel(1, {"a": ket("0")}, initial=["b"])

    def test_observable_degeneracy(self):
        obs = Observable("ZI", kron(GATES["Z"], np.eye(2)))
        assert obs.outcomes == pytest.approx((-1.0, 1.0))
        assert all(np.trace(p).real == pytest.approx(2) for p in obs.projectors)

    def test_closure_adds_reached_states_only(self):
        qm = one_qubit(initial=["+"])
        sig_model = quantum_model(qm)
        phi = prepare(sig_model, "<certain[1, Z]>(P[P0])")
        closed = close_carrier(qm, phi)
        assert closed.frozen and set(closed.carrier) == set(qm.carrier)
        fresh = QuantumModel(1, {"+": ket("+")}, PAULI)
        fresh.add_observable("P0", np.diag([1, 0]))
        closed = close_carrier(fresh, prepare(quantum_model(fresh), "<certain[1, Z]>(P[P0])"))
        # measuring Z creates both branches; the model itself is untouched
        assert len(closed.carrier) == 3 and len(fresh.carrier) == 1

    def test_closure_budget(self):
        fresh = QuantumModel(1, {"+": ket("+")}, PAULI)
        phi = prepare(quantum_model(fresh), "<certain[1, Z]>(<certain[1, X]>(T))")
        with pytest.raises(ClosureError):
            close_carrier(fresh, phi, max_states=2)


class TestLogic:
    def test_projector_certainty(self):
        qm = one_qubit()
        assert holds(qm, "P[P0]", "0")
        assert not holds(qm, "P[P0]", "+")
        assert holds(qm, "P[Pplus]", "+")

    def test_certain_after_outcome(self):
        qm = one_qubit()
        assert holds(qm, "<certain[1, Z]>(P[P0])", "+")
        assert holds(qm, "<certain[-1, Z]>(P[P1])", "+")
        assert not holds(qm, "<certain[1, Z]>(P[P1])", "+")
        # vacuous when the outcome cannot occur
        assert holds(qm, "<certain[-1, Z]>(F)", "0")

    def test_qdeq_probability(self):
        qm = one_qubit()
        assert holds(qm, "qdeq[0.5, 1, Z](T)", "+")
        assert holds(qm, "qdeq[0.5, 1, X](T)", "i")
        assert not holds(qm, "qdeq[0.5, 1, X](T)", "+")

    def test_unitary_adaptation_means_after_applying(self):
        qm = one_qubit()
        assert holds(qm, "U[H](P[P0])", "+")
        assert holds(qm, "U[X](P[P1])", "0")
        assert not holds(qm, "U[H](P[P0])", "0")

    def test_measure_is_conjunction_of_certainties(self):
        qm = one_qubit()
        assert holds(qm, "<measure[Z, 1, -1]>(P[P0], P[P1])", "+")
        assert not holds(qm, "<measure[Z, 1, -1]>(P[P1], P[P0])", "+")

    def test_restriction_to_qubits(self):
        qm = QuantumModel(2, {"s": kron(ket("0"), ket("+"))}, {"P0": np.diag([1, 0]), "Pplus": np.full((2, 2), 0.5)})
        assert holds(qm, "bits{1}(P[P0])", "s")
        assert holds(qm, "bits{2}(P[Pplus])", "s")
        assert not holds(qm, "bits{2}(P[P0])", "s")

    def test_restriction_respects_order(self):
        qm = QuantumModel(2, {"s": kron(ket("0"), ket("1"))}, {"P01": np.diag([0, 1, 0, 0]).astype(float)})
        assert holds(qm, "bits{1,2}(P[P01])", "s")
        assert not holds(qm, "bits{2,1}(P[P01])", "s")
        assert holds(qm, "bits{2,1}(T) -> T", "s")

    def test_lifting_matches_closed_form(self):
        qm = one_qubit()
        for x in qm.carrier:
            g = qm.structure_map(x)
            for a in "XYZ":
                for p in (0.0, 0.5, 1.0):
                    for r in (1.0, -1.0):
                        lam = qdeq_lifting(qm, p, r, a)
                        for u in ({"0"}, {"+", "-"}, set(qm.carrier)):
                            assert lam((frozenset(u),), g) == qdeq_explicit(g, u, p, r, qm.observable(a))

    def test_macro_errors_are_parse_errors(self):
        qm = one_qubit()
        with pytest.raises(ParseError):
            holds(qm, "P[Z]", "0")  # not a projector
        with pytest.raises(ParseError):
            holds(qm, "<measure[Z, 1, 2]>(T, T)", "0")
        with pytest.raises(ParseError):
            holds(qm, "<certain[1, W]>(T)", "0")
        with pytest.raises(ValueError):
            polyadic_measure_modality(qm, "Z", [1, 1])
        with pytest.raises(ValueError):
            projcert_modality(qm, "X")

    def test_fibre_mismatch_is_typing_error(self):
        qm = QuantumModel(2, {"s": kron(ket("0"), ket("0"))}, PAULI)
        with pytest.raises(TypingError):
            holds(qm, "<certain[1, Z]>(T)", "s")
        assert quantum_fibre(2).word == ("Obs2", "D", "R")

    def test_separation_on_pauli_eigenstates(self):
        from fibcoal.selftest import quantum_separation_report

        rep = quantum_separation_report()
        assert rep.ok and rep.checked == 15


def test_bell_observable_in_model():
    qm = QuantumModel(2, {"b3": bell_state(3)}, {"A": bell_observable()})
    (pair, p), = qm.measurement_distribution("b3", "A").items()
    assert pair.label == pytest.approx(3.0) and pair.inner == "b3" and p == pytest.approx(1.0)
