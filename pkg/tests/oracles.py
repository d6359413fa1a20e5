"""Independent reference implementations used as test oracles.

Nothing here imports fibcoal: these are plain numpy / set computations.
"""
from __future__ import annotations

import itertools

import numpy as np

S2 = 1 / np.sqrt(2)
I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
BELL = {
    1: S2 * np.array([1, 0, 0, 1], dtype=complex),
    2: S2 * np.array([1, 0, 0, -1], dtype=complex),
    3: S2 * np.array([0, 1, 1, 0], dtype=complex),
    4: S2 * np.array([0, 1, -1, 0], dtype=complex),
}
CANDIDATES = {"I": I2, "X": X, "Z": Z, "XZ": X @ Z, "ZX": Z @ X}


def overlap(a, b) -> float:
    return float(abs(np.vdot(a, b)))


def teleport_branches(phi):
    """For each Bell outcome on qubits 1,2 of ``phi (x) Bell1``: (probability, Bob's normalised state)."""
    psi = np.kron(phi, BELL[1]).reshape(4, 2)
    out = {}
    for i, b in BELL.items():
        bob = b.conj() @ psi
        p = float(np.vdot(bob, bob).real)
        out[i] = (p, bob / np.sqrt(p))
    return out


def derive_teleport_corrections(rng: np.random.Generator, trials: int = 5) -> dict[int, str]:
    """Which single-qubit Pauli word fixes Bob's qubit after each outcome, found by search."""
    table = {}
    for i in BELL:
        for name, u in CANDIDATES.items():
            ok = True
            for _ in range(trials):
                phi = rng.normal(size=2) + 1j * rng.normal(size=2)
                phi /= np.linalg.norm(phi)
                _, bob = teleport_branches(phi)[i]
                ok &= overlap(u @ bob, phi) >= 1 - 1e-12
            if ok:
                table[i] = name
                break
    return table


def swap_branches():
    """Bell measurement on qubits 2,3 of ``Bell1 (x) Bell1``: probability and the post state
    as ``(pair14, pair23)`` two-qubit vectors per outcome."""
    psi = np.kron(BELL[1], BELL[1]).reshape(2, 2, 2, 2)  # indices q1 q2 q3 q4
    out = {}
    for i, b in BELL.items():
        rest = np.einsum("bc,abcd->ad", b.conj().reshape(2, 2), psi).reshape(4)
        p = float(np.vdot(rest, rest).real)
        out[i] = (p, rest / np.sqrt(p), b)
    return out


def bell_index(v) -> int | None:
    for i, b in BELL.items():
        if overlap(v, b) >= 1 - 1e-9:
            return i
    return None


# -- Kripke / LTS ------------------------------------------------------------------

def lts_eval(formula, trans: dict) -> frozenset:
    """Direct semantics of ``("T",) | ("not", f) | ("and", f, g) | ("box", a, f)`` on an LTS
    given as ``{state: {label: [successors]}}``."""
    states = frozenset(trans)
    tag = formula[0]
    if tag == "T":
        return states
    if tag == "not":
        return states - lts_eval(formula[1], trans)
    if tag == "and":
        return lts_eval(formula[1], trans) & lts_eval(formula[2], trans)
    if tag == "box":
        a, inner = formula[1], lts_eval(formula[2], trans)
        return frozenset(x for x in states if all(y in inner for y in trans[x].get(a, ())))
    raise ValueError(tag)


def lts_text(formula) -> str:
    """Surface syntax for the same formula, with ``[a]`` written as ``<box^ev[a]>``."""
    tag = formula[0]
    if tag == "T":
        return "T"
    if tag == "not":
        return f"!({lts_text(formula[1])})"
    if tag == "and":
        return f"({lts_text(formula[1])} & {lts_text(formula[2])})"
    return f"<box^ev[{formula[1]}]>({lts_text(formula[2])})"


def random_lts_formula(rng, labels, depth: int, size: int = 4):
    """Modal depth at most ``depth``; ``size`` bounds boolean nesting on each branch."""
    pick = rng.choice(["T"] + (["not", "and"] if size > 0 else []) + (["box"] * 3 if depth > 0 else []))
    if pick == "T":
        return ("T",)
    if pick == "not":
        return ("not", random_lts_formula(rng, labels, depth, size - 1))
    if pick == "and":
        return ("and", random_lts_formula(rng, labels, depth, size - 1),
                random_lts_formula(rng, labels, depth, size - 1))
    return ("box", rng.choice(labels), random_lts_formula(rng, labels, depth - 1, size))


def naive_bisimilarity(frame: dict) -> set[tuple]:
    """Greatest bisimulation on a Kripke frame by removing violating pairs until stable."""
    rel = set(itertools.product(frame, frame))
    changed = True
    while changed:
        changed = False
        for x, y in list(rel):
            forth = all(any((u, v) in rel for v in frame[y]) for u in frame[x])
            back = all(any((u, v) in rel for u in frame[x]) for v in frame[y])
            if not (forth and back):
                rel.discard((x, y))
                changed = True
    return rel
