"""Dense complex linear algebra for small qubit registers.

Qubit 1 is the most significant tensor factor: ``|q1 q2 ... qk>``.
"""
from __future__ import annotations

import math
from functools import reduce
from typing import Sequence

import numpy as np

HERMITIAN_TOL = 1e-10
UNITARY_TOL = 1e-10


class LinalgError(Exception):
    pass


class NotHermitianError(LinalgError):
    pass


class ConvergenceError(LinalgError):
    pass


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.max(np.abs(m - m.conj().T), initial=0.0) <= tol


def is_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return np.max(np.abs(u.conj().T @ u - np.eye(len(u))), initial=0.0) <= tol


def is_projector(m: np.ndarray, tol: float = 1e-9) -> bool:
    return is_hermitian(m, tol) and np.max(np.abs(m @ m - m), initial=0.0) <= tol


def jacobi_eigh(m: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100):
    """Eigen-decomposition of a complex Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, vectors)`` with eigenvalues ascending and the
    eigenvectors as the columns of ``vectors``.  The sweep stops once the
    Frobenius norm of the off-diagonal part drops below ``tol`` (relative to
    the matrix norm when that exceeds one).
    """
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotHermitianError(f"expected a square matrix, got shape {a.shape}")
    if not is_hermitian(a):
        raise NotHermitianError("matrix is not Hermitian")
    a = (a + a.conj().T) / 2
    n = len(a)
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))

    def off_norm():
        # directly, not as total minus diagonal: that difference cancels catastrophically
        return float(np.linalg.norm(a - np.diag(np.diag(a))))

    for _ in range(max_sweeps):
        if off_norm() <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = apq / mag
                app, aqq = a[p, p].real, a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                if abs(theta) > 1e150:
                    t = 0.5 / theta  # theta**2 would overflow
                else:
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # phase the (p, q) entry real, then a real rotation kills it
                j = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ j
                a[idx, :] = j.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ j
    else:
        if off_norm() > tol * scale:
            raise ConvergenceError(f"no convergence after {max_sweeps} sweeps")

    w = np.real(np.diag(a))
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def group_eigenvalues(values: Sequence[float], tol: float = 1e-8) -> list[list[int]]:
    """Indices of (ascending) eigenvalues grouped into degenerate outcomes."""
    groups: list[list[int]] = []
    for i, r in enumerate(values):
        if groups and abs(r - values[groups[-1][0]]) <= tol * max(1.0, abs(r)):
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def kron(*ms) -> np.ndarray:
    return reduce(np.kron, [np.asarray(m, dtype=complex) for m in ms])


def dagger(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).conj().T


def outer(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def n_qubits(dim: int) -> int:
    k = int(round(math.log2(dim)))
    if 1 << k != dim:
        raise LinalgError(f"dimension {dim} is not a power of two")
    return k


def embed_operator(m: np.ndarray, positions: Sequence[int], k: int) -> np.ndarray:
    """Act as ``m`` on the (1-based) qubits ``positions`` of a ``k``-qubit register.

    The listed order matters: the first position carries ``m``'s most
    significant factor.  Identity on every other qubit.
    """
    m = np.asarray(m, dtype=complex)
    positions = [int(p) for p in positions]
    nm = n_qubits(len(m))
    if len(positions) != nm:
        raise LinalgError(f"{nm}-qubit operator given {len(positions)} positions")
    if len(set(positions)) != len(positions):
        raise LinalgError(f"repeated qubit in {positions}")
    if any(not 1 <= p <= k for p in positions):
        raise LinalgError(f"qubit positions {positions} outside 1..{k}")
    rest = [q for q in range(1, k + 1) if q not in positions]
    full = np.kron(m, np.eye(1 << len(rest), dtype=complex))
    order = [p - 1 for p in positions] + [q - 1 for q in rest]
    # full acts on qubits in ``order``; transpose its tensor back to 1..k
    t = full.reshape([2] * (2 * k))
    inv = np.argsort(order)
    t = t.transpose(list(inv) + [k + i for i in inv])
    return t.reshape(1 << k, 1 << k)


def embed_state_positions(psi: np.ndarray, order: Sequence[int]) -> np.ndarray:
    """Reorder the qubits of a state so that qubit ``order[i]`` (1-based) becomes qubit i+1."""
    k = len(order)
    t = np.asarray(psi, dtype=complex).reshape([2] * k)
    return t.transpose([q - 1 for q in order]).reshape(-1)


# -- gates and standard states ---------------------------------------------

SQRT_HALF = 1 / math.sqrt(2)

GATES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": SQRT_HALF * np.array([[1, 1], [1, -1]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex),
    "CNOT": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    "SWAP": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}

_KETS = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": SQRT_HALF * np.array([1, 1], dtype=complex),
    "-": SQRT_HALF * np.array([1, -1], dtype=complex),
    "i": SQRT_HALF * np.array([1, 1j], dtype=complex),
    "j": SQRT_HALF * np.array([1, -1j], dtype=complex),
}


def ket(label: str) -> np.ndarray:
    """Product state from a string over ``0 1 + - i j`` (``i``/``j`` = Y eigenstates)."""
    try:
        return kron(*[_KETS[ch] for ch in label])
    except KeyError as exc:
        raise LinalgError(f"unknown single-qubit state {exc.args[0]!r}") from None


def bell_state(i: int) -> np.ndarray:
    """Bell states numbered 1..4: (|00>+|11>), (|00>-|11>), (|01>+|10>), (|01>-|10>), over sqrt 2."""
    table = {
        1: [1, 0, 0, 1],
        2: [1, 0, 0, -1],
        3: [0, 1, 1, 0],
        4: [0, 1, -1, 0],
    }
    if i not in table:
        raise LinalgError(f"Bell index {i} outside 1..4")
    return SQRT_HALF * np.array(table[i], dtype=complex)


def bell_projector(i: int) -> np.ndarray:
    return outer(bell_state(i))


def bell_observable() -> np.ndarray:
    """Bell-basis measurement with outcome ``i`` for the i-th Bell state."""
    return sum(i * bell_projector(i) for i in range(1, 5))


def random_state(rng: np.random.Generator, n_qubits: int = 1) -> np.ndarray:
    v = rng.normal(size=1 << n_qubits) + 1j * rng.normal(size=1 << n_qubits)
    return v / np.linalg.norm(v)


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2
