"""Teleportation and entanglement-swapping demos run through the full check pipeline."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .modelfile import quantum_model
from .quantum.gates import ExpressionError, as_vector, evaluate_expression
from .quantum.linalg import LinalgError, ket
from .quantum.model import QuantumModel
from .quantum.protocols import FIXED_INPUTS, formula_text, swap_model, teleport_model
from .report import CheckReport, check, read_formulas


@dataclass
class DemoResult:
    label: str
    reports: list[CheckReport]
    probabilities: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.holds for r in self.reports)

    def failed(self) -> list[str]:
        return [r.name for r in self.reports if not r.holds]

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "ok": self.ok,
            "probabilities": {f"{r:g}": p for r, p in self.probabilities.items()},
            "formulas": {r.name: r.holds for r in self.reports},
        }

    def render(self) -> str:
        lines = [f"{self.label}: {'ALL HOLD' if self.ok else 'FAILED ' + ', '.join(self.failed())}"]
        if self.probabilities:
            probs = "  ".join(f"r{r:g}={p:.6f}" for r, p in self.probabilities.items())
            lines.append(f"  outcome probabilities: {probs}")
        for r in self.reports:
            lines.append(f"  {r.name}: {'TRUE' if r.holds else 'FALSE'}")
        return "\n".join(lines)


def parse_state(spec: str) -> np.ndarray:
    """A one-qubit input state: ``|0>``-style names, a label over ``0 1 + - i j``, or a gate expression."""
    spec = spec.strip()
    for key in (spec, f"|{spec}>"):
        if key in FIXED_INPUTS:
            return FIXED_INPUTS[key]
    try:
        if spec and set(spec) <= set("01+-ij"):
            v = ket(spec)
        else:
            v = as_vector(evaluate_expression(spec))
    except LinalgError as exc:
        raise ExpressionError(str(exc)) from None
    if len(v) != 2:
        raise ExpressionError(f"input state must be a single qubit, got dimension {len(v)}")
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ExpressionError("input state is the zero vector")
    return v / norm


def outcome_probabilities(qm: QuantumModel, observable: str, positions: tuple[int, ...],
                          state: str = "start") -> dict[float, float]:
    """Born probabilities of measuring ``observable`` on the given qubits of ``state``."""
    scratch = qm.copy(frozen=False)
    obs = scratch.embedded(scratch.observable(observable), tuple(positions))
    return {pair[0]: p for pair, p in sorted(scratch.measurement_distribution(state, obs).items())}


def _run(qm: QuantumModel, formula_file: str, label: str, max_carrier: int | None,
         probabilities: dict) -> DemoResult:
    model = quantum_model(qm)
    formulas = read_formulas(formula_text(formula_file))
    reports = [check(model, text, name=name, max_carrier=max_carrier) for name, text in formulas.items()]
    return DemoResult(label, reports, probabilities)


def teleport_demo(phi: np.ndarray, label: str = "teleport", corrections: bool = True, channel: int = 1,
                  tolerance: float = 1e-9, max_carrier: int | None = None) -> DemoResult:
    """The full formula and the four per-outcome formulae at ``phi (x) Bell_channel``."""
    qm = teleport_model(phi, channel=channel, corrections=corrections, tolerance=tolerance)
    probs = outcome_probabilities(qm, "A_bell", (1, 2))
    return _run(qm, "teleport.fml", label, max_carrier, probs)


def swap_demo(corrections: bool = True, tolerance: float = 1e-9, max_carrier: int | None = None,
              label: str | None = None) -> DemoResult:
    """The four per-outcome swapping formulae at ``Bell1 (x) Bell1``."""
    qm = swap_model(corrections=corrections, tolerance=tolerance)
    probs = outcome_probabilities(qm, "A_bell", (2, 3))
    label = label or ("swap" if corrections else "swap without corrections")
    return _run(qm, "swap.fml", label, max_carrier, probs)
