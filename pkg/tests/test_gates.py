import numpy as np
import pytest

from fibcoal.quantum.gates import ExpressionError, as_matrix, as_vector, evaluate_expression
from fibcoal.quantum.linalg import GATES, bell_observable, bell_state, ket, kron


def test_arithmetic_and_builtins():
    assert np.allclose(evaluate_expression("kron(X, Z)"), kron(GATES["X"], GATES["Z"]))
    assert np.allclose(evaluate_expression("X @ Z"), GATES["X"] @ GATES["Z"])
    assert np.allclose(evaluate_expression("1*BELL1 + 2*BELL2 + 3*BELL3 + 4*BELL4"), bell_observable())
    assert np.allclose(evaluate_expression("kron(ket('+'), bell(1))"), kron(ket("+"), bell_state(1)))
    assert np.allclose(evaluate_expression("-(X) / 2"), -GATES["X"] / 2)
    assert np.allclose(evaluate_expression("exp(1j * pi / 4)"), np.exp(1j * np.pi / 4))


def test_lists_and_user_names():
    assert np.allclose(evaluate_expression("[[1, 0], [0, -1]]"), GATES["Z"])
    assert np.allclose(evaluate_expression("psi * 2", {"psi": np.array([1, 0])}), [2, 0])


@pytest.mark.parametrize("text", [
    "__import__('os')", "X.T", "open('f')", "lambda: 1", "X if 1 else Z", "Q", "kron(", "X ** 2",
])
def test_rejects_anything_else(text):
    with pytest.raises(ExpressionError):
        evaluate_expression(text)


def test_shape_helpers():
    assert as_vector([1, 0]).shape == (2,)
    with pytest.raises(ExpressionError):
        as_vector(np.eye(2))
    with pytest.raises(ExpressionError):
        as_matrix([1, 0])
