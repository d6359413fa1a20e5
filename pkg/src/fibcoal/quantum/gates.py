"""Matrix and state expressions for model files.

An expression is a small arithmetic language over numpy arrays::

    kron(H, I) @ CNOT          # 2-qubit unitary
    proj(ket('0+'))            # rank-one projector
    1*BELL1 + 2*BELL2 + 3*BELL3 + 4*BELL4   # Bell-basis observable
    [[1, 0], [0, -1j]]         # literal matrix

Names: the gates ``I X Y Z H S T CNOT SWAP``, ``BELL1``..``BELL4`` (Bell
projectors) and any previously declared names.  Functions: ``kron``,
``proj``, ``dag``, ``ket``, ``bell``, ``embed``, ``eye``, ``sqrt``, ``exp``.
Operators: ``+ - * / @`` and unary minus; ``j`` suffixes give imaginary
literals.  Nothing else is evaluated.
"""
from __future__ import annotations

import ast
import cmath
import operator
from typing import Mapping

import numpy as np

from .linalg import GATES, bell_projector, bell_state, dagger, embed_operator, ket, kron, outer


class ExpressionError(ValueError):
    pass


_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.MatMult: operator.matmul,
}


def _embed(m, positions, k):
    return embed_operator(m, [int(p) for p in positions], int(k))


FUNCTIONS = {
    "kron": kron,
    "proj": outer,
    "dag": dagger,
    "ket": ket,
    "bell": bell_state,
    "embed": _embed,
    "eye": lambda n: np.eye(int(n), dtype=complex),
    "sqrt": cmath.sqrt,
    "exp": cmath.exp,
}


def builtin_names() -> dict:
    names = dict(GATES)
    names.update({f"BELL{i}": bell_projector(i) for i in range(1, 5)})
    names["pi"] = np.pi
    return names


def evaluate_expression(text: str, names: Mapping | None = None):
    """Evaluate ``text`` with the built-in names plus ``names``; returns an array or scalar."""
    env = builtin_names()
    env.update(names or {})
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"bad expression {text!r}: {exc.msg}") from None
    return _eval(tree.body, env, text)


def _eval(node, env, text):
    if isinstance(node, ast.Constant):
        if isinstance(node.value, (int, float, complex)) and not isinstance(node.value, bool):
            return node.value
        if isinstance(node.value, str):
            return node.value
        raise ExpressionError(f"unsupported literal {node.value!r} in {text!r}")
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise ExpressionError(f"unknown name {node.id!r} in {text!r}")
        return env[node.id]
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval(node.left, env, text), _eval(node.right, env, text))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand, env, text)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, (ast.List, ast.Tuple)):
        return np.array([_eval(e, env, text) for e in node.elts], dtype=complex)
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
        fn = FUNCTIONS.get(node.func.id)
        if fn is None:
            raise ExpressionError(f"unknown function {node.func.id!r} in {text!r}")
        args = [_eval(a, env, text) for a in node.args]
        try:
            return fn(*args)
        except (TypeError, ValueError) as exc:
            raise ExpressionError(f"{node.func.id}: {exc}") from None
    raise ExpressionError(f"unsupported syntax in {text!r}")


def as_matrix(value, what: str = "matrix") -> np.ndarray:
    m = np.asarray(value, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ExpressionError(f"{what} must be a square matrix, got shape {m.shape}")
    return m


def as_vector(value, what: str = "state") -> np.ndarray:
    v = np.asarray(value, dtype=complex)
    if v.ndim != 1:
        raise ExpressionError(f"{what} must be a vector, got shape {v.shape}")
    return v
