"""Teleportation and entanglement swapping, as quantum models plus shipped formulae.

Bell states are numbered ``Bell1 = |00>+|11>``, ``Bell2 = |00>-|11>``,
``Bell3 = |01>+|10>``, ``Bell4 = |01>-|10>`` (over sqrt 2), and the Bell
observable gives outcome ``i`` for ``Bell_i``.  The matching corrections
are ``I, Z, X, XZ`` (``XZ`` applies Z first).
"""
from __future__ import annotations

from importlib import resources

import numpy as np

from .linalg import GATES, bell_observable, bell_projector, bell_state, kron, outer, random_state
from .model import QuantumModel

CORRECTIONS = {
    1: GATES["I"],
    2: GATES["Z"],
    3: GATES["X"],
    4: GATES["X"] @ GATES["Z"],
}

TELEPORT_ALIASES = {"Alice": "bits{1}", "Channel": "bits{2,3}", "Both": "bits{1,2}", "Bob": "bits{3}"}

FIXED_INPUTS = {
    "|0>": np.array([1, 0], dtype=complex),
    "|1>": np.array([0, 1], dtype=complex),
    "|+>": np.array([1, 1], dtype=complex) / np.sqrt(2),
    "|->": np.array([1, -1], dtype=complex) / np.sqrt(2),
    "|+i>": np.array([1, 1j], dtype=complex) / np.sqrt(2),
}


def formula_text(name: str) -> str:
    return resources.files("fibcoal.data").joinpath(name).read_text()


def sweep_inputs(seed: int = 0, n_random: int = 10) -> dict[str, np.ndarray]:
    """The fixed inputs followed by ``n_random`` seeded Haar-ish random qubits."""
    rng = np.random.default_rng(seed)
    states = dict(FIXED_INPUTS)
    for k in range(n_random):
        states[f"random{k + 1}"] = random_state(rng, 1)
    return states


def teleport_model(phi: np.ndarray, channel: int = 1, corrections: bool = True,
                   tolerance: float = 1e-9, max_states: int = 10_000) -> QuantumModel:
    """Three qubits in ``phi (x) Bell_channel``; observables ``phi``, ``bell1``, ``A_bell``."""
    phi = np.asarray(phi, dtype=complex)
    phi = phi / np.linalg.norm(phi)
    qm = QuantumModel(
        3,
        {"start": kron(phi, bell_state(channel))},
        observables={"phi": outer(phi), "bell1": bell_projector(1), "A_bell": bell_observable()},
        unitaries={f"C{i}": (u if corrections else GATES["I"]) for i, u in CORRECTIONS.items()},
        tolerance=tolerance,
        max_states=max_states,
    )
    qm.morphism_aliases.update(TELEPORT_ALIASES)
    return qm


def swap_model(corrections: bool = True, tolerance: float = 1e-9,
               max_states: int = 10_000) -> QuantumModel:
    """Four qubits in ``Bell1 (x) Bell1``; ``K_i`` is ``C_i (x) I`` on a qubit pair."""
    qm = QuantumModel(
        4,
        {"start": kron(bell_state(1), bell_state(1))},
        observables={"bell1": bell_projector(1), "A_bell": bell_observable()},
        unitaries={f"K{i}": kron(u if corrections else GATES["I"], GATES["I"])
                   for i, u in CORRECTIONS.items()},
        tolerance=tolerance,
        max_states=max_states,
    )
    return qm
