"""YAML model files.

Every file has a ``kind``; the rest of the schema depends on it.

``kind: kripke``::

    transitions: {x: [x, y], y: []}
    initial: [x]                      # optional, defaults to every state

``kind: lts``::

    labels: [a, b]
    transitions: {x: {a: [y]}, y: {}}

``kind: markov``::

    transitions: {x: {x: 0.5, y: 0.5}, y: {y: 1}}

``kind: quantum``::

    qubits: 3
    tolerance: 1.0e-9                 # optional
    overlap_tolerance: 1.0e-9         # optional
    max_states: 10000                 # optional carrier budget
    states:      {start: "kron(ket('0'), bell(1))"}
    observables: {phi: "proj(ket('0'))", A_bell: "1*BELL1 + 2*BELL2 + 3*BELL3 + 4*BELL4"}
    unitaries:   {C2: Z}
    morphisms:   {Alice: "bits{1}"}   # aliases usable in formulae
    constants:   {r1: 1}
    initial: [start]

Matrix and state entries are gate expressions (see :mod:`fibcoal.quantum.gates`)
or literal nested lists of numbers or complex strings such as ``"0.5+0.5j"``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .classical import (
    classical_signature, classical_structure, kripke_coalgebra, lts_coalgebra, markov_coalgebra,
)
from .quantum.gates import ExpressionError, as_matrix, as_vector, evaluate_expression
from .quantum.linalg import LinalgError
from .quantum.logic import quantum_signature, quantum_structure
from .quantum.model import QuantumModel
from .semantics.evaluate import Coalgebra
from .semantics.structure import Structure
from .semantics.values import DEFAULT_TOLERANCE, ShapeError
from .signature import FibredSignature


class ModelFileError(ValueError):
    """The model document is malformed."""


@dataclass
class Model:
    kind: str
    signature: FibredSignature
    structure: Structure
    coalgebra: Coalgebra | None
    initial: tuple
    tolerance: float = DEFAULT_TOLERANCE
    quantum: QuantumModel | None = None
    source: str | None = None
    extra: dict = field(default_factory=dict)


def load_model(path: str | Path, tolerance: float | None = None) -> Model:
    text = Path(path).read_text()
    model = parse_model(text, tolerance)
    model.source = str(path)
    return model


def parse_model(text: str, tolerance: float | None = None) -> Model:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ModelFileError(f"model file is not valid YAML: {exc}") from None
    if not isinstance(doc, dict):
        raise ModelFileError("model file must be a mapping")
    kind = doc.get("kind")
    builders = {"kripke": _kripke, "lts": _lts, "markov": _markov, "quantum": _quantum}
    if kind not in builders:
        raise ModelFileError(f"unknown model kind {kind!r}; expected one of {sorted(builders)}")
    return builders[kind](doc, tolerance)


def _tol(doc: dict, override: float | None) -> float:
    if override is not None:
        return float(override)
    return float(doc.get("tolerance", DEFAULT_TOLERANCE))


def _states(doc: dict) -> dict:
    trans = doc.get("transitions")
    if not isinstance(trans, dict) or not trans:
        raise ModelFileError("'transitions' must be a nonempty mapping")
    return {str(k): v if v is not None else [] for k, v in trans.items()}


def _initial(doc: dict, carrier) -> tuple:
    initial = tuple(str(s) for s in doc.get("initial", carrier))
    missing = [s for s in initial if s not in carrier]
    if missing:
        raise ModelFileError(f"initial states {missing} not in the carrier")
    return initial


def _check_targets(trans: dict, targets_of) -> None:
    for x, out in trans.items():
        for y in targets_of(out):
            if str(y) not in trans:
                raise ModelFileError(f"state {x!r} points at undeclared state {y!r}")


def _kripke(doc: dict, tolerance) -> Model:
    trans = _states(doc)
    _check_targets(trans, lambda ys: ys)
    succ = {x: [str(y) for y in ys] for x, ys in trans.items()}
    tol = _tol(doc, tolerance)
    c = kripke_coalgebra(succ)
    return Model("kripke", classical_signature(), classical_structure(tolerance=tol), c,
                 _initial(doc, c.carrier), tol)


def _lts(doc: dict, tolerance) -> Model:
    trans = _states(doc)
    labels = tuple(str(a) for a in doc.get("labels", ()))
    if not labels:
        raise ModelFileError("an LTS needs a nonempty 'labels' list")
    by_label = {}
    for x, out in trans.items():
        out = out or {}
        if not isinstance(out, dict):
            raise ModelFileError(f"transitions of {x!r} must map labels to successor lists")
        unknown = set(map(str, out)) - set(labels)
        if unknown:
            raise ModelFileError(f"state {x!r} uses undeclared labels {sorted(unknown)}")
        by_label[x] = {str(a): [str(y) for y in ys or []] for a, ys in out.items()}
    _check_targets(by_label, lambda out: [y for ys in out.values() for y in ys])
    tol = _tol(doc, tolerance)
    c = lts_coalgebra(by_label, labels)
    return Model("lts", classical_signature(labels), classical_structure(labels, tol), c,
                 _initial(doc, c.carrier), tol)


def _markov(doc: dict, tolerance) -> Model:
    trans = _states(doc)
    chain = {}
    for x, out in trans.items():
        if not isinstance(out, dict):
            raise ModelFileError(f"transitions of {x!r} must map successors to probabilities")
        chain[x] = {str(y): float(p) for y, p in out.items()}
    _check_targets(chain, lambda out: out)
    tol = _tol(doc, tolerance)
    try:
        c = markov_coalgebra(chain)
    except ShapeError as exc:
        raise ModelFileError(str(exc)) from None
    return Model("markov", classical_signature(), classical_structure(tolerance=tol), c,
                 _initial(doc, c.carrier), tol)


def _value(entry: Any, names: dict, what: str):
    if isinstance(entry, str):
        try:
            return evaluate_expression(entry, names)
        except ExpressionError as exc:
            raise ModelFileError(f"{what}: {exc}") from None
    if isinstance(entry, (list, tuple)):
        def conv(v):
            if isinstance(v, (list, tuple)):
                return [conv(u) for u in v]
            if isinstance(v, str):
                try:
                    return complex(v.replace(" ", ""))
                except ValueError:
                    raise ModelFileError(f"{what}: bad number {v!r}") from None
            return v
        return conv(entry)
    raise ModelFileError(f"{what}: expected an expression or a literal list")


def _quantum(doc: dict, tolerance) -> Model:
    try:
        qubits = int(doc["qubits"])
    except (KeyError, TypeError, ValueError):
        raise ModelFileError("a quantum model needs an integer 'qubits'") from None
    tol = _tol(doc, tolerance)
    names: dict = {}

    def section(key, conv):
        out = {}
        for name, entry in (doc.get(key) or {}).items():
            try:
                v = conv(_value(entry, names, f"{key}.{name}"), f"{key}.{name}")
            except (ExpressionError, LinalgError) as exc:
                raise ModelFileError(str(exc)) from None
            names[str(name)] = v
            out[str(name)] = v
        return out

    states = section("states", as_vector)
    observables = section("observables", as_matrix)
    unitaries = section("unitaries", as_matrix)
    try:
        qm = QuantumModel(
            qubits, states, observables, unitaries, doc.get("initial"),
            tolerance=tol,
            overlap_tolerance=float(doc.get("overlap_tolerance", 1e-9)),
            max_states=int(doc.get("max_states", 10_000)),
        )
    except (ValueError, KeyError, LinalgError) as exc:
        raise ModelFileError(str(exc)) from None
    qm.constants.update({str(k): v for k, v in (doc.get("constants") or {}).items()})
    qm.morphism_aliases.update({str(k): str(v) for k, v in (doc.get("morphisms") or {}).items()})
    return quantum_model(qm)


def quantum_model(qm: QuantumModel) -> Model:
    """Wrap an in-memory :class:`QuantumModel` as a loaded model."""
    return Model("quantum", quantum_signature(qm), quantum_structure(qm), None, qm.initial,
                 qm.tolerance, quantum=qm)
