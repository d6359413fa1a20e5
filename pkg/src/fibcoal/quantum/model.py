"""Pure-state quantum coalgebras.

A state maps every observable to the Born-rule distribution over
``(outcome, post-measurement state)`` pairs.  Post-measurement states are
interned into the model's carrier, identified up to global phase.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from ..semantics.evaluate import Coalgebra, Evaluator
from ..semantics.values import Dist, Pair, Table
from .linalg import (
    LinalgError, dagger, embed_operator, group_eigenvalues, is_hermitian, is_unitary,
    jacobi_eigh, n_qubits,
)

DEFAULT_MAX_STATES = 10_000
DEFAULT_MAX_QUBITS = 5


class ClosureError(Exception):
    """A successor state is missing from a closed carrier, or the state budget ran out."""


def fingerprint(m: np.ndarray) -> bytes:
    m = np.asarray(m, dtype=complex)
    return bytes(str(m.shape), "ascii") + (np.round(m, 9) + 0.0).tobytes()


_SPECTRA: dict[bytes, tuple] = {}
_SPECTRA_LOCK = threading.Lock()


def spectral_decomposition(m: np.ndarray, group_tol: float = 1e-8):
    """Distinct eigenvalues (ascending) with their spectral projectors; memoised."""
    key = fingerprint(m)
    hit = _SPECTRA.get(key)
    if hit is not None:
        return hit
    w, v = jacobi_eigh(m)
    outcomes, projectors = [], []
    for group in group_eigenvalues(w, group_tol):
        vecs = v[:, group]
        outcomes.append(float(np.mean(w[group])))
        projectors.append(vecs @ vecs.conj().T)
    result = (tuple(outcomes), tuple(projectors))
    with _SPECTRA_LOCK:
        _SPECTRA.setdefault(key, result)
    return result


class Observable:
    """A Hermitian operator with its spectral decomposition cached."""

    __slots__ = ("name", "matrix", "outcomes", "projectors", "key")

    def __init__(self, name: str, matrix):
        m = np.array(matrix, dtype=complex)
        if not is_hermitian(m):
            raise LinalgError(f"observable {name!r} is not Hermitian")
        n_qubits(len(m))
        self.name = name
        self.matrix = m
        self.key = fingerprint(m)
        self.outcomes, self.projectors = spectral_decomposition(m)

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @property
    def qubits(self) -> int:
        return n_qubits(self.dim)

    def outcome_index(self, r: float, tol: float = 1e-8) -> int | None:
        for j, o in enumerate(self.outcomes):
            if abs(o - r) <= tol * max(1.0, abs(o)):
                return j
        return None

    def __eq__(self, other):
        return isinstance(other, Observable) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Observable({self.name!r}, qubits={self.qubits}, outcomes={list(self.outcomes)})"


def observable_key(obs: Observable) -> bytes:
    return obs.key


def embed_observable(obs: Observable, positions: Sequence[int], k: int) -> Observable:
    """``obs`` acting on the listed qubits of a ``k``-qubit register, identity elsewhere."""
    name = f"{obs.name}@{{{','.join(map(str, positions))}}}"
    return Observable(name, embed_operator(obs.matrix, positions, k))


def conjugate_observable(obs: Observable, u: np.ndarray, name: str = "U") -> Observable:
    """``U^dagger A U``: measuring it on psi gives the statistics of ``A`` on ``U psi``."""
    u = np.asarray(u, dtype=complex)
    return Observable(f"{name}+({obs.name})", dagger(u) @ obs.matrix @ u)


@dataclass(frozen=True)
class PureState:
    vector: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=complex)
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"state has norm {norm}")
        object.__setattr__(self, "vector", v)

    def same_ray(self, other: "PureState", tol: float = 1e-9) -> bool:
        return abs(np.vdot(self.vector, other.vector)) >= 1 - tol


class QuantumModel:
    """Qubit register, a carrier of named pure states and registries of
    observables and unitaries.

    The model starts open: measuring may add successor states.  ``close``
    (or :func:`close_carrier`) freezes it, after which a missing successor
    raises :class:`ClosureError`.
    """

    def __init__(self, qubits: int, states: Mapping[str, np.ndarray] | Sequence[np.ndarray] = (),
                 observables: Mapping[str, np.ndarray] | None = None,
                 unitaries: Mapping[str, np.ndarray] | None = None,
                 initial: Iterable[str] | None = None,
                 tolerance: float = 1e-9, overlap_tolerance: float = 1e-9,
                 max_states: int = DEFAULT_MAX_STATES, max_qubits: int = DEFAULT_MAX_QUBITS):
        if not 1 <= qubits <= max_qubits:
            raise ValueError(f"{qubits} qubits outside the supported range 1..{max_qubits}")
        self.qubits = qubits
        self.dim = 1 << qubits
        self.tolerance = tolerance
        self.overlap_tolerance = overlap_tolerance
        self.max_states = max_states
        self.max_qubits = max_qubits
        self.frozen = False
        self._names: list[str] = []
        self._vectors = np.zeros((0, self.dim), dtype=complex)
        self._lock = threading.RLock()
        self._observables: dict[str, Observable] = {}
        self._unitaries: dict[str, np.ndarray] = {}
        self._derived: dict = {}
        self.constants: dict[str, float] = {}
        self.morphism_aliases: dict[str, str] = {}

        named = states.items() if isinstance(states, Mapping) else (
            (f"s{i}", v) for i, v in enumerate(states))
        for name, vec in named:
            if self.find(vec) is not None:
                raise ValueError(f"state {name!r} duplicates a carrier state up to phase")
            self._add(name, vec)
        self.initial = tuple(initial) if initial is not None else tuple(self._names)
        for s in self.initial:
            if s not in self._names:
                raise ValueError(f"initial state {s!r} not in the carrier")
        for name, m in (observables or {}).items():
            self.add_observable(name, m)
        for name, u in (unitaries or {}).items():
            self.add_unitary(name, u)

    # -- registries
    def add_observable(self, name: str, m) -> Observable:
        obs = m if isinstance(m, Observable) else Observable(name, m)
        if obs.qubits > self.max_qubits:
            raise ValueError(f"observable {name!r} exceeds {self.max_qubits} qubits")
        self._observables[name] = obs
        return obs

    def add_unitary(self, name: str, u) -> None:
        u = np.array(u, dtype=complex)
        if not is_unitary(u):
            raise LinalgError(f"{name!r} is not unitary")
        n_qubits(len(u))
        self._unitaries[name] = u

    def observable(self, name) -> Observable:
        if isinstance(name, Observable):
            return name
        try:
            return self._observables[name]
        except KeyError:
            raise KeyError(f"unregistered observable {name!r}") from None

    def unitary(self, name: str) -> np.ndarray:
        try:
            return self._unitaries[name]
        except KeyError:
            raise KeyError(f"unregistered unitary {name!r}") from None

    @property
    def observables(self) -> dict[str, Observable]:
        return dict(self._observables)

    @property
    def unitaries(self) -> dict[str, np.ndarray]:
        return dict(self._unitaries)

    def embedded(self, obs: Observable, positions: tuple[int, ...]) -> Observable:
        key = ("embed", obs.key, positions)
        hit = self._derived.get(key)
        if hit is None:
            hit = self._derived.setdefault(key, embed_observable(obs, positions, self.qubits))
        return hit

    def conjugated(self, obs: Observable, unitary: str) -> Observable:
        key = ("conj", obs.key, unitary)
        hit = self._derived.get(key)
        if hit is None:
            u = self.unitary(unitary)
            if len(u) != obs.dim:
                raise LinalgError(f"unitary {unitary!r} and observable {obs.name!r} differ in dimension")
            hit = self._derived.setdefault(key, conjugate_observable(obs, u, unitary))
        return hit

    # -- carrier
    @property
    def carrier(self) -> tuple[str, ...]:
        return tuple(self._names)

    def state(self, name: str) -> np.ndarray:
        return self._vectors[self._names.index(name)]

    def find(self, vec) -> str | None:
        v = np.asarray(vec, dtype=complex)
        if len(v) != self.dim:
            raise ValueError(f"state of dimension {len(v)} in a {self.dim}-dimensional model")
        if not len(self._names):
            return None
        overlaps = np.abs(self._vectors.conj() @ v)
        i = int(np.argmax(overlaps))
        return self._names[i] if overlaps[i] >= 1 - self.overlap_tolerance else None

    def _add(self, name: str, vec) -> str:
        v = np.asarray(vec, dtype=complex)
        norm = np.linalg.norm(v)
        if abs(norm - 1) > 1e-10:
            raise ValueError(f"state {name!r} has norm {norm}")
        if name in self._names:
            raise ValueError(f"duplicate state name {name!r}")
        self._names.append(name)
        self._vectors = np.vstack([self._vectors, v[None, :]])
        return name

    def intern(self, vec) -> str:
        with self._lock:
            found = self.find(vec)
            if found is not None:
                return found
            if self.frozen:
                raise ClosureError("successor state outside the closed carrier")
            if len(self._names) >= self.max_states:
                raise ClosureError(f"carrier exceeds the budget of {self.max_states} states")
            n = len(self._names)
            while f"s{n}" in self._names:
                n += 1
            return self._add(f"s{n}", vec)

    def copy(self, frozen: bool | None = None) -> "QuantumModel":
        new = object.__new__(QuantumModel)
        new.__dict__.update(self.__dict__)
        new._names = list(self._names)
        new._vectors = self._vectors.copy()
        new._lock = threading.RLock()
        new._observables = dict(self._observables)
        new._unitaries = dict(self._unitaries)
        new._derived = dict(self._derived)
        new.constants = dict(self.constants)
        new.morphism_aliases = dict(self.morphism_aliases)
        new.frozen = self.frozen if frozen is None else frozen
        return new

    # -- dynamics
    def measurement_distribution(self, state: str, obs: Observable | str) -> Dist:
        """Born rule: outcome ``r_j`` with probability ``<psi|P_j|psi>``, successor ``P_j psi`` normalised.

        Outcomes of probability at most the model tolerance are dropped.
        """
        obs = self.observable(obs)
        if obs.dim != self.dim:
            raise LinalgError(f"measuring a {obs.qubits}-qubit observable on a {self.qubits}-qubit state")
        psi = self.state(state)
        masses = []
        for r, proj in zip(obs.outcomes, obs.projectors):
            phi = proj @ psi
            p = float(np.vdot(psi, phi).real)
            if p <= self.tolerance:
                continue
            succ = self.intern(phi / np.sqrt(p))
            masses.append((Pair(r, succ), p))
        return Dist(masses, tolerance=max(1e-8, 10 * self.tolerance))

    def structure_map(self, state: str) -> Table:
        if state not in self._names:
            raise ClosureError(f"state {state!r} is not in the carrier")
        return Table(extend=lambda obs: self.measurement_distribution(state, obs), key=observable_key)

    def coalgebra(self) -> Coalgebra:
        from .logic import quantum_fibre

        # the callable view of the carrier, so states added during closure stay reachable
        return Coalgebra(self.carrier, self.structure_map, quantum_fibre(self.qubits))

    def close(self) -> "QuantumModel":
        return self.copy(frozen=True)


def close_carrier(model: QuantumModel, formula, states: Iterable[str] | None = None,
                  max_states: int | None = None) -> QuantumModel:
    """Extend the carrier with every successor reached while evaluating ``formula``.

    Evaluation starts at ``states`` (default: the initial states), so the
    closure goes exactly as deep as the formula's modal nesting.  Returns a
    frozen copy.
    """
    from ..syntax.translate import translate
    from ..signature import FibMorphism
    from .logic import quantum_fibre, quantum_structure

    open_model = model.copy(frozen=False)
    if max_states is not None:
        open_model.max_states = max_states
    fibre = quantum_fibre(model.qubits)
    phi = translate(FibMorphism.identity(fibre), formula)
    ev = Evaluator(quantum_structure(open_model), open_model.coalgebra())
    for x in (open_model.initial if states is None else tuple(states)):
        ev.holds(phi, x)
    return open_model.copy(frozen=True)
