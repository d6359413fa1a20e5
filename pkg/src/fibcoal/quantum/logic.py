"""The quantum fibred signature ``Q_k = Obs_k * D * R`` and its structure.

``Obs_k`` is the exponent by the k-qubit observables, ``D`` finite
distributions and ``R`` outcome-labelled pairs, so a ``Q_k`` value is a
table from observables to distributions over ``(outcome, successor)``.

Morphisms:

* ``ev[A] : Q_k -> D*R``       read off the distribution for observable A
* ``bits{i,...} : Q_n -> Q_m`` restrict to the listed qubits (n = model size)
* ``U[name] : Q_m -> Q_m``     after applying a registered unitary

Derived modalities (macros):

* ``dreq[p, r]``        ``detcert[r] ; deq[p]``
* ``qdeq[p, r, A]``     ``dreq[p, r]^ev[A]``
* ``P[proj]``           ``top ; qdeq[1, 1, proj]``: proj certainly yields 1
* ``certain[r, A]``     ``not ; qdeq[0, r, A]``: after outcome r, the argument holds
* ``measure[A, r1, ..., rk]``  k-ary: after outcome r_i the i-th argument holds
"""
from __future__ import annotations

from ..classical import (
    DistKind, ExpKind, PairKind, deq_lifting, detcert_lifting, dreq, neg, not_lifting, top,
    top_lifting,
)
from ..semantics.evaluate import eval_lifting
from ..semantics.structure import Lifting, NatTrans, Structure
from ..semantics.values import Dist, ShapeError, Table
from ..signature import (
    UNIT, FibMorphism, FibObject, FibredSignature, Generator, ModalityFamily, MorphismFamily,
)
from ..syntax.ast import MConj, ModalityExpr, Superscript, Then, Weaken
from .linalg import is_projector
from .model import Observable, QuantumModel, observable_key

D = FibObject.of("D")
R = FibObject.of("R")
DR = D @ R


def obs_generator(k: int) -> str:
    return f"Obs{k}"


def quantum_fibre(k: int) -> FibObject:
    return FibObject.of(obs_generator(k), "D", "R")


def _positions(params) -> tuple[int, ...]:
    if len(params) == 1 and isinstance(params[0], tuple):
        params = params[0]
    return tuple(int(p) for p in params)


def quantum_signature(model: QuantumModel) -> FibredSignature:
    k_max = model.max_qubits

    def ev_typing(params):
        obs = model.observable(params[0])
        return quantum_fibre(obs.qubits), DR

    def bits_typing(params):
        pos = _positions(params)
        if not pos or len(set(pos)) != len(pos) or any(not 1 <= p <= model.qubits for p in pos):
            raise ValueError(f"bad qubit selection {pos} for a {model.qubits}-qubit model")
        return quantum_fibre(model.qubits), quantum_fibre(len(pos))

    def u_typing(params):
        m = len(model.unitary(params[0])).bit_length() - 1
        return quantum_fibre(m), quantum_fibre(m)

    aliases = {}

    def macro_qdeq(ps):
        p, r, a = ps
        return qdeq_modality(model, p, r, a)

    sig = FibredSignature(
        object_generators=tuple(obs_generator(k) for k in range(1, k_max + 1)) + ("D", "R"),
        morphisms=(
            MorphismFamily("ev", typing=ev_typing),
            MorphismFamily("bits", typing=bits_typing),
            MorphismFamily("U", typing=u_typing),
        ),
        modalities=(
            ModalityFamily("deq", D, 1, 1),
            ModalityFamily("detcert", R, 1, 1),
            ModalityFamily("top", UNIT, 0),
            ModalityFamily("not", UNIT, 1),
        ),
        object_aliases={f"Q{k}": quantum_fibre(k) for k in range(1, k_max + 1)},
        constants=dict(model.constants),
        macros={
            "dreq": lambda ps: dreq(*ps),
            "qdeq": macro_qdeq,
            "P": lambda ps: projcert_modality(model, *ps),
            "certain": lambda ps: qdcert_modality(model, *ps),
            "measure": lambda ps: polyadic_measure_modality(model, ps[0], ps[1:]),
        },
    )
    from ..syntax.parser import parse_morphism

    for alias, target in model.morphism_aliases.items():
        aliases[alias] = parse_morphism(target, sig)
    sig.morphism_aliases.update(aliases)
    return sig


def ev_morphism(model: QuantumModel, observable: str) -> FibMorphism:
    obs = model.observable(observable)
    return FibMorphism.from_generator(Generator("ev", (observable,), quantum_fibre(obs.qubits), DR))


def qdeq_modality(model: QuantumModel, p: float, r: float, observable: str) -> ModalityExpr:
    """``dreq[p, r]^ev[A]``: the outcome-r mass landing in the argument is p."""
    return Superscript(dreq(float(p), float(r)), ev_morphism(model, observable))


def projcert_modality(model: QuantumModel, projector: str) -> ModalityExpr:
    """0-ary: measuring the projector certainly gives outcome 1."""
    obs = model.observable(projector)
    if not is_projector(obs.matrix):
        raise ValueError(f"{projector!r} is not a projector")
    return Then(top(), qdeq_modality(model, 1.0, 1.0, projector))


def qdcert_modality(model: QuantumModel, r: float, observable: str) -> ModalityExpr:
    """Unary: every successor reached with outcome r satisfies the argument.

    Vacuously true when outcome r has probability zero.
    """
    model.observable(observable)
    return Then(neg(), qdeq_modality(model, 0.0, r, observable))


def polyadic_measure_modality(model: QuantumModel, observable: str, outcomes) -> ModalityExpr:
    obs = model.observable(observable)
    outcomes = [float(r) for r in outcomes]
    if not outcomes:
        raise ValueError("a measurement modality needs at least one outcome")
    if len({obs.outcome_index(r) for r in outcomes}) != len(outcomes):
        raise ValueError("outcomes must be distinct")
    for r in outcomes:
        if obs.outcome_index(r) is None:
            raise ValueError(f"{r:g} is not an eigenvalue of {observable!r}")
    k = len(outcomes)
    return MConj(tuple(Weaken(qdcert_modality(model, r, observable), k, i) for i, r in enumerate(outcomes)))


# -- natural transformations ------------------------------------------------

def restrict_nat(model: QuantumModel, positions) -> NatTrans:
    """``Q_n => Q_m``: a k-qubit observable is queried as its embedding in the full register."""
    pos = _positions(positions)

    def component(t: Table) -> Table:
        if not isinstance(t, Table):
            raise ShapeError(f"restriction expects a table, got {t!r}")
        return t.precompose(lambda a: model.embedded(a, pos), key=observable_key)

    return NatTrans(f"bits{{{','.join(map(str, pos))}}}", quantum_fibre(model.qubits),
                    quantum_fibre(len(pos)), component)


def unitary_nat(model: QuantumModel, unitary: str) -> NatTrans:
    """Observable ``A`` is answered by ``U^dagger A U``, i.e. as if ``U`` had been applied first."""
    m = model.unitary(unitary)
    k = len(m).bit_length() - 1

    def component(t: Table) -> Table:
        if not isinstance(t, Table):
            raise ShapeError(f"unitary adaptation expects a table, got {t!r}")
        return t.precompose(lambda a: model.conjugated(a, unitary), key=observable_key)

    return NatTrans(f"U[{unitary}]", quantum_fibre(k), quantum_fibre(k), component)


def eval_observable_nat(model: QuantumModel, observable: str) -> NatTrans:
    obs = model.observable(observable)

    def component(t: Table) -> Dist:
        if not isinstance(t, Table):
            raise ShapeError(f"evaluation expects a table, got {t!r}")
        return t[obs]

    return NatTrans(f"ev[{observable}]", quantum_fibre(obs.qubits), DR, component)


def quantum_structure(model: QuantumModel) -> Structure:
    tol = model.tolerance
    functors = {obs_generator(k): ExpKind() for k in range(1, model.max_qubits + 1)}
    functors.update({"D": DistKind(max(1e-8, 10 * tol)), "R": PairKind()})
    return Structure(
        functors=functors,
        nats={
            "ev": lambda ps: eval_observable_nat(model, ps[0]).component,
            "bits": lambda ps: restrict_nat(model, ps).component,
            "U": lambda ps: unitary_nat(model, ps[0]).component,
        },
        liftings={
            "deq": lambda ps: deq_lifting(ps[0], tol),
            "detcert": lambda ps: detcert_lifting(ps[0], tol),
            "top": lambda ps: top_lifting(),
            "not": lambda ps: not_lifting(),
        },
        tolerance=tol,
    )


def qdeq_lifting(model: QuantumModel, p: float, r: float, observable: str) -> Lifting:
    """``qdeq[p, r, A]`` as a lifting, evaluated through its modality expression."""
    expr = qdeq_modality(model, p, r, observable)
    st = quantum_structure(model)
    obs = model.observable(observable)
    return Lifting(f"qdeq[{p:g}, {r:g}, {observable}]", 1, quantum_fibre(obs.qubits),
                   lambda args, g: eval_lifting(expr, st, args, g))


def qdeq_explicit(g: Table, subset, p: float, r: float, obs: Observable, tol: float = 1e-9) -> bool:
    """Closed form: the outcome-r mass of ``g(A)`` inside ``subset`` equals ``p``."""
    d = g[obs]
    total = sum(q for v, q in d.items() if abs(v.label - r) <= tol and v.inner in subset)
    return abs(total - p) <= tol
