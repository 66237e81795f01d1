"""Command line front end.

Subcommands:

  run      one trajectory, CSV or JSON
  paper    recompute the tabulated reference runs and gate on agreement
  compare  race the two interaction modes from one initial weight
  sweep    convergence census over a grid of initial weights
  mc       stochastic ensemble checked against the analytic weight series

Exit codes: 0 success, 1 numeric failure inside the engine, 2 bad
configuration, 3 reference mismatch from `paper`. Output is deterministic
byte for byte given the same flags (mc included, its seeding is explicit).
"""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path

import click

from .analysis import (compare_modes, reference_sequences,
                       sweep_initial_conditions)
from .errors import (DegenerateInitialError, ModeMismatchError,
                     NormalizationError, NumericDomainError, OutOfRangeError,
                     ScheduleConflictError, SplitLoopError)
from .montecarlo import GENERATOR_NAME, agreement_report, ensemble_frequencies
from .states import (InteractionMode, SplitterCoefficients, Topology,
                     WeightPair, amplitudes_from_left_weight)
from .trajectory import NotConverged, Scenario, StepSchedule, iterate

EXIT_NUMERIC = 1
EXIT_CONFIG = 2
EXIT_REFERENCE = 3

_MODES = {
    "unitary": InteractionMode.FIXED_SPLITTER,
    "measure": InteractionMode.MOVABLE_SPLITTER,
}
_TOPOLOGIES = {t.value: t for t in Topology}

_mode_option = click.option(
    "--mode", type=click.Choice(sorted(_MODES)), required=True,
    help="interaction mode at the splitter")
_topology_option = click.option(
    "--topology", type=click.Choice(list(_TOPOLOGIES)), default="both",
    show_default=True, help="fiber topology")
_out_option = click.option(
    "--out", type=click.Path(dir_okay=False, writable=True), default=None,
    help="write output to this file instead of stdout")


def _config_error(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_CONFIG)


def _numeric_error(exc: NumericDomainError) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(EXIT_NUMERIC)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text)


def _resolve_setup(mode: InteractionMode, wl1: float | None,
                   a1sq: float | None):
    """Initial state and splitter from the two overlapping flags.

    Either flag alone implies the other (tied preparation); giving both
    unties them.
    """
    if wl1 is None and a1sq is None:
        _config_error("need --wl1 or --a1sq to fix the initial condition")
    for flag, field, value in (("--wl1", "w_left_initial", wl1),
                               ("--a1sq", "a1_squared", a1sq)):
        if value is not None and not 0.0 <= value <= 1.0:
            _config_error(f"{flag}: {field} out of range, "
                          f"{value!r} not in [0, 1]")
    if wl1 is None:
        wl1 = a1sq
    if a1sq is None:
        a1sq = wl1
    try:
        splitter = SplitterCoefficients.from_reflectance(a1sq)
        if mode is InteractionMode.FIXED_SPLITTER:
            initial = amplitudes_from_left_weight(wl1)
        else:
            initial = WeightPair(wl1, 1.0 - wl1)
    except (OutOfRangeError, NormalizationError) as exc:
        _config_error(str(exc))
    return initial, splitter, wl1, a1sq


def _parse_switches(switch_args: tuple[str, ...]) -> StepSchedule:
    parsed = []
    for text in switch_args:
        step_text, sep, topo_text = text.partition(":")
        if not sep or topo_text not in _TOPOLOGIES:
            _config_error(
                f"bad --switch {text!r}, expected STEP:TOPOLOGY with "
                f"topology one of {', '.join(_TOPOLOGIES)}")
        try:
            step = int(step_text)
        except ValueError:
            _config_error(f"bad --switch step {step_text!r}, expected an "
                          f"integer")
        parsed.append((step, _TOPOLOGIES[topo_text]))
    try:
        return StepSchedule(tuple(parsed))
    except ScheduleConflictError as exc:
        _config_error(str(exc))


def _parse_grid(text: str) -> tuple[float, ...]:
    parts = text.split(":")
    if len(parts) != 3:
        _config_error(f"bad --grid {text!r}, expected START:STOP:STEP")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        _config_error(f"bad --grid {text!r}, entries must be numbers")
    if step <= 0.0 or stop < start:
        _config_error(f"bad --grid {text!r}: need STEP > 0 and STOP >= START")
    values = []
    k = 0
    while True:
        v = start + k * step
        if v > stop + step / 2.0:  # both ends inclusive, half-step slack
            break
        values.append(v)
        k += 1
    return tuple(values)


@click.group()
def main() -> None:
    """Twin-loop splitter dynamics: simulate, analyze, cross-check."""


@main.command()
@_mode_option
@_topology_option
@click.option("--wl1", type=float, default=None,
              help="initial left weight in [0, 1]")
@click.option("--a1sq", type=float, default=None,
              help="splitter reflectance a1^2 in [0, 1]")
@click.option("--steps", type=int, default=20, show_default=True,
              help="number of recorded passes, the first being the start")
@click.option("--period", type=float, default=1.0, show_default=True,
              help="loop traversal time per pass")
@click.option("--switch", "switches", multiple=True, metavar="STEP:TOPOLOGY",
              help="retopologize before the map of the named step; repeatable")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
@_out_option
def run(mode, topology, wl1, a1sq, steps, period, switches, fmt, out):
    """Simulate one trajectory and print every recorded pass."""
    mode_obj = _MODES[mode]
    initial, splitter, wl1_val, a1sq_val = _resolve_setup(mode_obj, wl1, a1sq)
    schedule = _parse_switches(switches)
    try:
        scenario = Scenario(mode_obj, _TOPOLOGIES[topology], splitter,
                            initial, max_steps=steps, period=period)
        trajectory = iterate(scenario, schedule)
    except (OutOfRangeError, ModeMismatchError, ScheduleConflictError) as exc:
        _config_error(str(exc))
    except NumericDomainError as exc:
        _numeric_error(exc)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "time", "topology", "a", "b",
                         "w_left", "w_right"])
        for r in trajectory.records:
            a = repr(r.amplitudes.a_left) if r.amplitudes else ""
            b = repr(r.amplitudes.b_right) if r.amplitudes else ""
            writer.writerow([r.n, repr(r.time), r.topology.value, a, b,
                             repr(r.weights.w_left),
                             repr(r.weights.w_right)])
        text = buf.getvalue()
    else:
        records = []
        for r in trajectory.records:
            records.append({
                "n": r.n,
                "time": r.time,
                "topology": r.topology.value,
                "a": r.amplitudes.a_left if r.amplitudes else None,
                "b": r.amplitudes.b_right if r.amplitudes else None,
                "w_left": r.weights.w_left,
                "w_right": r.weights.w_right,
            })
        final = trajectory.final
        payload = {
            "config": {
                "mode": mode,
                "topology": topology,
                "w_left_initial": wl1_val,
                "a1_squared": a1sq_val,
                "steps": steps,
                "period": period,
                "switches": [[s, t.value] for s, t in schedule.switches],
            },
            "records": records,
            "summary": {
                "final_w_left": final.weights.w_left,
                "final_w_right": final.weights.w_right,
                "final_topology": final.topology.value,
            },
        }
        text = json.dumps(payload, indent=2) + "\n"
    _emit(text, out)


@main.command()
@click.option("--format", "fmt", type=click.Choice(["text", "json"]),
              default="text", show_default=True)
@_out_option
def paper(fmt, out):
    """Recompute the tabulated reference runs; exit 3 on any mismatch."""
    report = reference_sequences()
    if fmt == "json":
        payload = {
            "sequences": [{
                "name": s.name,
                "initial_w_left": s.initial_w_left,
                "steps": list(s.steps),
                "reference": list(s.reference),
                "computed": list(s.computed),
                "computed_display": list(s.computed_display()),
                "deviations": list(s.deviations),
                "max_deviation": s.max_deviation,
                "within_tolerance": s.within_tolerance,
                "note": s.note,
            } for s in report.sequences],
            "all_within_tolerance": report.all_within_tolerance,
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = []
        for s in report.sequences:
            lines.append(f"sequence {s.name}")
            lines.append("  n  reference  computed  deviation")
            for n, ref, shown, dev in zip(s.steps, s.reference,
                                          s.computed_display(), s.deviations):
                lines.append(f"  {n}  {ref}  {shown}  {dev:.2e}")
            verdict = ("within tolerance" if s.within_tolerance
                       else "EXCEEDS tolerance")
            lines.append(f"  max deviation {s.max_deviation:.2e}, {verdict}")
            if s.note:
                lines.append(f"  note: {s.note}")
        lines.append("all reference sequences reproduced"
                     if report.all_within_tolerance
                     else "reference mismatch detected")
        text = "\n".join(lines) + "\n"
    _emit(text, out)
    if not report.all_within_tolerance:
        sys.exit(EXIT_REFERENCE)


@main.command()
@click.option("--wl1", type=float, required=True,
              help="shared initial left weight, strictly inside (0, 1)")
@click.option("--eps", type=float, default=1e-3, show_default=True,
              help="convergence distance to the balanced state")
@click.option("--max-steps", type=int, default=10000, show_default=True)
@click.option("--a1sq", type=float, default=None,
              help="explicit splitter reflectance; default ties it to --wl1")
def compare(wl1, eps, max_steps, a1sq):
    """Steps to balance under each interaction mode, from the same start."""
    splitter = None
    try:
        if a1sq is not None:
            splitter = SplitterCoefficients.from_reflectance(a1sq)
        result = compare_modes(wl1, eps, max_steps, splitter)
    except (OutOfRangeError, DegenerateInitialError) as exc:
        _config_error(str(exc))
    except NumericDomainError as exc:
        _numeric_error(exc)

    def describe(steps):
        if isinstance(steps, NotConverged):
            return (f"no convergence in {steps.steps} steps "
                    f"(final distance {steps.final_distance:.3e})")
        return f"{steps} steps"

    lines = [
        f"initial left weight {result.w_left_initial!r}, "
        f"epsilon {result.epsilon!r}",
        f"unitary (fixed splitter): {describe(result.unitary_steps)}",
        f"measurement (movable splitter): "
        f"{describe(result.measurement_steps)}",
    ]
    if result.ratio is not None:
        lines.append(f"ratio measurement / unitary: {result.ratio:.3g}")
    click.echo("\n".join(lines))


@main.command()
@_mode_option
@_topology_option
@click.option("--grid", default="0.05:0.95:0.05", show_default=True,
              metavar="START:STOP:STEP",
              help="initial left weights, both ends inclusive")
@click.option("--eps", type=float, default=1e-3, show_default=True)
@click.option("--max-steps", type=int, default=1000, show_default=True)
@click.option("--a1sq", type=float, default=None,
              help="splitter reflectance; required for measure mode")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
@_out_option
def sweep(mode, topology, grid, eps, max_steps, a1sq, fmt, out):
    """Convergence census over a grid of initial left weights."""
    mode_obj = _MODES[mode]
    grid_values = _parse_grid(grid)
    splitter = None
    try:
        if a1sq is not None:
            splitter = SplitterCoefficients.from_reflectance(a1sq)
        result = sweep_initial_conditions(mode_obj, _TOPOLOGIES[topology],
                                          grid_values, eps, max_steps,
                                          splitter)
    except (OutOfRangeError, ModeMismatchError) as exc:
        _config_error(str(exc))
    except NumericDomainError as exc:
        _numeric_error(exc)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["w_initial", "converged", "steps",
                         "final_w_left", "final_w_right"])
        for cell in result.cells:
            writer.writerow([repr(cell.w_initial),
                             "true" if cell.converged else "false",
                             cell.steps if cell.steps is not None else "",
                             repr(cell.final_w_left),
                             repr(cell.final_w_right)])
        text = buf.getvalue()
    else:
        payload = {
            "config": {
                "mode": mode,
                "topology": topology,
                "grid": list(grid_values),
                "epsilon": eps,
                "max_steps": max_steps,
                "a1_squared": a1sq,
                "target_w_left": result.target.w_left,
                "target_w_right": result.target.w_right,
            },
            "cells": [{
                "w_initial": c.w_initial,
                "converged": c.converged,
                "steps": c.steps,
                "final_w_left": c.final_w_left,
                "final_w_right": c.final_w_right,
            } for c in result.cells],
        }
        text = json.dumps(payload, indent=2) + "\n"
    _emit(text, out)


@main.command()
@click.option("--mode", type=click.Choice(sorted(_MODES)), default="measure",
              show_default=True,
              help="only measure mode has per-path statistics")
@_topology_option
@click.option("--a1sq", type=float, required=True,
              help="splitter reflectance a1^2; also the initial left weight")
@click.option("--steps", type=int, default=10, show_default=True)
@click.option("--paths", type=int, required=True,
              help="ensemble size")
@click.option("--seed", type=int, required=True,
              help="base seed; path i uses stream seed + i")
@click.option("--sigma", type=float, default=4.0, show_default=True,
              help="agreement bound in standard errors")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
@_out_option
def mc(mode, topology, a1sq, steps, paths, seed, sigma, fmt, out):
    """Sample a photon ensemble and check it against the exact weights."""
    if _MODES[mode] is InteractionMode.FIXED_SPLITTER:
        _config_error("unsupported mode for sampling: only movable-splitter "
                      "dynamics have per-path statistics")
    topo_obj = _TOPOLOGIES[topology]
    try:
        splitter = SplitterCoefficients.from_reflectance(a1sq)
        estimate = ensemble_frequencies(splitter, topo_obj, steps, paths,
                                        seed)
        analytic = iterate(Scenario(InteractionMode.MOVABLE_SPLITTER,
                                    topo_obj, splitter,
                                    WeightPair(a1sq, 1.0 - a1sq),
                                    max_steps=steps))
        rows = agreement_report(estimate,
                                [r.weights for r in analytic.records],
                                sigma_bound=sigma)
    except (OutOfRangeError, NormalizationError) as exc:
        _config_error(str(exc))
    except NumericDomainError as exc:
        _numeric_error(exc)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["step", "empirical_w_left", "analytic_w_left",
                         "stderr", "z", "passed"])
        for row in rows:
            writer.writerow([row.step, repr(row.empirical),
                             repr(row.analytic), repr(row.stderr),
                             repr(row.z), "true" if row.passed else "false"])
        text = buf.getvalue()
    else:
        payload = {
            "config": {
                "topology": topology,
                "a1_squared": a1sq,
                "steps": steps,
                "n_paths": paths,
                "base_seed": seed,
                "generator": GENERATOR_NAME,
                "sigma_bound": sigma,
            },
            "steps": [{
                "step": r.step,
                "empirical_w_left": r.empirical,
                "analytic_w_left": r.analytic,
                "stderr": r.stderr,
                "z": r.z,
                "passed": r.passed,
            } for r in rows],
            "summary": {"all_within_sigma": all(r.passed for r in rows)},
        }
        text = json.dumps(payload, indent=2) + "\n"
    _emit(text, out)


if __name__ == "__main__":
    main()
