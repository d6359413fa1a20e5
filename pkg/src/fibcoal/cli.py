"""Command-line front end.

Exit codes: 0 success, 1 a checked formula or demo does not hold, 2 parse
error (formula, model file or gate expression), 3 typing error, 4 closure or
carrier budget exceeded, 5 property counterexample found by ``selftest``.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .modelfile import ModelFileError, load_model
from .quantum.gates import ExpressionError
from .quantum.linalg import LinalgError
from .quantum.model import ClosureError
from .semantics.values import ShapeError
from .signature import SignatureError
from .syntax.parser import ParseError
from .syntax.typing import TypingError

EXIT_OK, EXIT_FAILS, EXIT_PARSE, EXIT_TYPING, EXIT_CLOSURE, EXIT_COUNTEREXAMPLE = 0, 1, 2, 3, 4, 5

_ERRORS = (
    ((ParseError, ModelFileError, ExpressionError), EXIT_PARSE, "parse error"),
    ((TypingError, SignatureError), EXIT_TYPING, "typing error"),
    ((ClosureError, ShapeError, LinalgError), EXIT_CLOSURE, "closure error"),
)


def _fail(exc: Exception) -> None:
    for classes, code, label in _ERRORS:
        if isinstance(exc, classes):
            click.echo(f"{label}: {exc}", err=True)
            sys.exit(code)
    raise exc


def _emit(doc, as_json: bool, text: str) -> None:
    click.echo(json.dumps(doc, indent=2, sort_keys=True, default=str) if as_json else text)


@click.group()
def main():
    """Model checking for fibred coalgebraic modal logic."""


@main.command("check")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="YAML model file.")
@click.option("--formula", required=True, help="Formula file, or an inline formula.")
@click.option("--state", "states", multiple=True, help="Evaluate at this state instead of the initial ones.")
@click.option("--tolerance", type=float, default=None, help="Numerical tolerance (overrides the model file).")
@click.option("--max-carrier", type=int, default=None, help="Budget for quantum carrier closure.")
@click.option("--seed", type=int, default=0, show_default=True, help="Recorded in the report.")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable report.")
@click.option("--timing", is_flag=True, help="Include wall-clock timings.")
def check_cmd(model_path, formula, states, tolerance, max_carrier, seed, as_json, timing):
    """Check FORMULA on a model; exit 0 iff every formula holds at the initial states."""
    from .report import check, read_formulas, reports_json

    path = Path(formula)
    text = path.read_text() if path.is_file() else formula
    try:
        model = load_model(model_path, tolerance)
        formulas = read_formulas(text, default_name="formula")
        if not formulas:
            raise ParseError("no formula given")
        reports = [check(model, f, name=name if len(formulas) > 1 else None, max_carrier=max_carrier,
                         states=states or None)
                   for name, f in formulas.items()]
    except Exception as exc:  # noqa: BLE001 - mapped to exit codes
        _fail(exc)
    if as_json:
        click.echo(reports_json(reports, timing, model=model_path, seed=seed))
    else:
        click.echo("\n\n".join(r.render(timing) for r in reports))
    sys.exit(EXIT_OK if all(r.holds for r in reports) else EXIT_FAILS)


@main.command("demo-teleport")
@click.option("--state", "state", default=None, help="One-qubit input, e.g. 0, +, i or \"(ket('0') + ket('1'))\".")
@click.option("--sweep", is_flag=True, help="Fixed inputs plus seeded random ones (default when no --state).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--tolerance", type=float, default=1e-9, show_default=True)
@click.option("--max-carrier", type=int, default=None)
@click.option("--json", "as_json", is_flag=True)
def demo_teleport(state, sweep, seed, tolerance, max_carrier, as_json):
    """Teleportation: the full formula and the four per-outcome formulae."""
    from .demos import parse_state, teleport_demo
    from .quantum.protocols import sweep_inputs

    try:
        if state is not None and not sweep:
            inputs = {state: parse_state(state)}
        else:
            inputs = sweep_inputs(seed)
        results = [teleport_demo(v, label, tolerance=tolerance, max_carrier=max_carrier)
                   for label, v in inputs.items()]
    except Exception as exc:  # noqa: BLE001
        _fail(exc)
    ok = all(r.ok for r in results)
    _emit({"demo": "teleport", "seed": seed, "tolerance": tolerance, "ok": ok,
           "inputs": [r.to_json() for r in results]},
          as_json, "\n".join(r.render() for r in results) + f"\n\nteleport: {'OK' if ok else 'FAILED'}")
    sys.exit(EXIT_OK if ok else EXIT_FAILS)


@main.command("demo-swap")
@click.option("--tolerance", type=float, default=1e-9, show_default=True)
@click.option("--max-carrier", type=int, default=None)
@click.option("--json", "as_json", is_flag=True)
def demo_swap(tolerance, max_carrier, as_json):
    """Entanglement swapping, with corrections and (for contrast) without."""
    from .demos import swap_demo

    try:
        fixed = swap_demo(True, tolerance, max_carrier)
        bare = swap_demo(False, tolerance, max_carrier)
    except Exception as exc:  # noqa: BLE001
        _fail(exc)
    _emit({"demo": "swap", "tolerance": tolerance, "ok": fixed.ok,
           "corrected": fixed.to_json(), "uncorrected": bare.to_json()},
          as_json, f"{fixed.render()}\n\n{bare.render()}\n\nswap: {'OK' if fixed.ok else 'FAILED'}")
    sys.exit(EXIT_OK if fixed.ok else EXIT_FAILS)


@main.command("selftest")
@click.argument("suite", type=click.Choice(["naturality", "separation", "translation", "invariance", "lemmas", "all"]))
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def selftest_cmd(suite, seed, as_json):
    """Run a seeded property suite; exit 5 on any counterexample."""
    from .selftest import SUITES, run_suite

    names = SUITES if suite == "all" else (suite,)
    reports = [(name, rep) for name in names for rep in run_suite(name, seed)]
    ok = all(rep.ok for _, rep in reports)
    lines = []
    for name, rep in reports:
        lines.append(f"[{name}] {rep}")
        lines.extend(f"    counterexample: {c!r}" for c in rep.counterexamples)
    doc = {"seed": seed, "ok": ok, "suites": [
        {"suite": name, "kind": rep.kind, "checked": rep.checked, "failures": rep.failures,
         "counterexamples": [repr(c) for c in rep.counterexamples]} for name, rep in reports]}
    _emit(doc, as_json, "\n".join(lines))
    sys.exit(EXIT_OK if ok else EXIT_COUNTEREXAMPLE)


if __name__ == "__main__":
    main()
