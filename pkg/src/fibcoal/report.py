"""The check pipeline: parse, type, close, translate, evaluate, report."""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field

from .modelfile import Model
from .quantum.model import ClosureError, close_carrier
from .semantics.evaluate import Evaluator
from .signature import FibMorphism, format_object
from .syntax.ast import Formula
from .syntax.parser import format_formula, parse_formula
from .syntax.translate import translate
from .syntax.typing import TypingError, elaborate, type_of_formula


@dataclass
class CheckReport:
    formula: str
    type: str
    satisfying: list
    verdicts: dict
    initial: list
    holds: bool
    seconds: float
    tolerance: float
    carrier_size: int
    name: str | None = None
    notes: list = field(default_factory=list)

    def to_json(self, timing: bool = False) -> dict:
        doc = asdict(self)
        if not timing:
            del doc["seconds"]
        return doc

    def render(self, timing: bool = False) -> str:
        title = f"[{self.name}] " if self.name else ""
        lines = [
            f"{title}formula: {self.formula}",
            f"  type: {self.type}",
            f"  carrier: {self.carrier_size} states, tolerance {self.tolerance:g}",
            f"  satisfying: {{{', '.join(map(str, self.satisfying))}}}",
        ]
        for x in self.initial:
            lines.append(f"  initial {x}: {'TRUE' if self.verdicts[x] else 'FALSE'}")
        lines.extend(f"  note: {n}" for n in self.notes)
        result = f"  result: {'HOLDS' if self.holds else 'FAILS'}"
        if timing:
            result += f" ({self.seconds * 1000:.1f} ms)"
        lines.append(result)
        return "\n".join(lines)


def model_fibre(model: Model):
    if model.quantum is not None:
        from .quantum.logic import quantum_fibre

        return quantum_fibre(model.quantum.qubits)
    return model.coalgebra.fibre


def prepare(model: Model, formula: str | Formula) -> Formula:
    """Parse (if needed), fill in unannotated ``T`` fibres, and type-check against the model fibre."""
    phi = parse_formula(formula, model.signature) if isinstance(formula, str) else formula
    fibre = model_fibre(model)
    phi = elaborate(phi, model.signature, fibre)
    found = type_of_formula(phi, model.signature)
    if found != fibre:
        raise TypingError("formula does not live in the model's fibre", (), fibre, found)
    return phi


def check(model: Model, formula: str | Formula, name: str | None = None,
          max_carrier: int | None = None, states=None) -> CheckReport:
    """Evaluate ``formula`` on ``model``.

    ``states`` overrides the model's initial states.  Classical models are
    evaluated on the whole carrier.  Quantum models are closed from the
    initial states first and verdicts are reported for those states only;
    ``satisfying`` then lists the satisfying initial states.
    """
    start = time.perf_counter()
    phi = prepare(model, formula)
    fibre = model_fibre(model)
    psi = translate(FibMorphism.identity(fibre), phi, model.signature)
    notes = []
    initial = list(model.initial if states is None else states)
    if model.quantum is not None:
        unknown = [x for x in initial if x not in model.quantum.carrier]
        if unknown:
            raise ClosureError(f"states {unknown} are not in the carrier")
        closed = close_carrier(model.quantum, phi, initial, max_states=max_carrier)
        from .quantum.logic import quantum_structure

        ev = Evaluator(quantum_structure(closed), closed.coalgebra())
        states = tuple(initial)
        carrier_size = len(closed.carrier)
        notes.append(f"carrier closed from {len(model.quantum.carrier)} to {carrier_size} states")
    else:
        unknown = [x for x in initial if x not in model.coalgebra.carrier]
        if unknown:
            raise ClosureError(f"states {unknown} are not in the carrier")
        ev = Evaluator(model.structure, model.coalgebra)
        states = model.coalgebra.carrier
        carrier_size = len(states)
    verdicts = {x: ev.holds(psi, x) for x in states}
    satisfying = [x for x in states if verdicts[x]]
    return CheckReport(
        formula=format_formula(phi) if not isinstance(formula, str) else formula.strip(),
        type=format_object(fibre),
        satisfying=satisfying,
        verdicts=verdicts,
        initial=initial,
        holds=all(verdicts[x] for x in initial),
        seconds=time.perf_counter() - start,
        tolerance=model.tolerance,
        carrier_size=carrier_size,
        name=name,
        notes=notes,
    )


def reports_json(reports, timing: bool = False, **extra) -> str:
    """Timings are left out unless asked for, so equal runs give equal bytes."""
    doc = dict(extra)
    doc["reports"] = [r.to_json(timing) for r in reports]
    return json.dumps(doc, indent=2, sort_keys=True, default=str)


def read_formulas(text: str, default_name: str = "formula") -> dict[str, str]:
    """Split a formula file into named formulae.

    A line ``@name`` starts a new formula; text before the first header (other
    than comments and blank lines) forms a formula called ``default_name``.
    """
    out: dict[str, list[str]] = {}
    current = default_name
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("@") and stripped[1:].isidentifier():
            current = stripped[1:]
            if current in out:
                raise ValueError(f"formula {current!r} defined twice")
            out[current] = []
            continue
        out.setdefault(current, []).append(line)
    return {k: "\n".join(v) for k, v in out.items() if _has_content(v)}


def _has_content(lines) -> bool:
    return any(ln.strip() and not ln.strip().startswith("#") for ln in lines)
