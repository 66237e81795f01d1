"""Canned studies built on the engine: reference runs, mode races, sweeps.

The reference sequences are three canonical runs whose per-step left
weights are tabulated below at the precision they are usually quoted at.
Recomputing them and comparing against the table is the package's
regression sentinel: any change to the step maps shows up as a deviation
beyond the per-entry tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateInitialError, ModeMismatchError, OutOfRangeError
from .maps import induced_weight_map, stable_fixed_point
from .states import (AmplitudePair, InteractionMode, SplitterCoefficients,
                     Topology, WeightPair, amplitudes_from_left_weight,
                     weights_of)
from .trajectory import (ConvergenceCriterion, NotConverged, Scenario,
                         iterate, steps_to_converge)

#: Tabulated left weights for steps 2..5 of the canonical runs, kept as the
#: decimal strings they are quoted as so each entry remembers its precision.
#: The movable-splitter table was itself produced by rounding intermediate
#: values, so it sits up to about 3e-3 away from the exact recurrence and
#: its comparison tolerance is correspondingly loose.
_COARSE_ROUNDING_NOTE = (
    "reference entries for this run carry accumulated display rounding; "
    "deviations up to about 3e-3 from the exact recurrence are expected")

_REFERENCE_TABLE = (
    ("unitary-w1-0.9", InteractionMode.FIXED_SPLITTER, 0.9,
     ("0.735", "0.562", "0.504", "0.500"), (5e-4, 5e-4, 5e-4, 5e-4), None),
    ("unitary-w1-0.05", InteractionMode.FIXED_SPLITTER, 0.05,
     ("0.84", "0.65", "0.524", "0.5006"), (5e-3, 5e-3, 5e-4, 5e-4), None),
    ("measure-a1sq-0.9", InteractionMode.MOVABLE_SPLITTER, 0.9,
     ("0.820", "0.7552", "0.703", "0.661"), (3e-3, 3e-3, 3e-3, 3e-3),
     _COARSE_ROUNDING_NOTE),
)

_BALANCED = WeightPair(0.5, 0.5)


@dataclass(frozen=True)
class SequenceComparison:
    """One canonical run: computed left weights against tabulated ones."""

    name: str
    mode: InteractionMode
    initial_w_left: float
    steps: tuple[int, ...]
    computed: tuple[float, ...]
    reference: tuple[str, ...]
    tolerances: tuple[float, ...]
    deviations: tuple[float, ...]
    max_deviation: float
    within_tolerance: bool
    note: str | None = None

    def computed_display(self) -> tuple[str, ...]:
        """Computed values formatted to the reference entries' precision."""
        out = []
        for value, ref in zip(self.computed, self.reference):
            decimals = len(ref.split(".")[1]) if "." in ref else 0
            out.append(f"{value:.{decimals}f}")
        return tuple(out)


@dataclass(frozen=True)
class ReferenceReport:
    sequences: tuple[SequenceComparison, ...]
    all_within_tolerance: bool


def _canonical_w_left_series(mode: InteractionMode, p: float,
                             n_steps: int) -> list[float]:
    splitter = SplitterCoefficients.from_reflectance(p)
    if mode is InteractionMode.FIXED_SPLITTER:
        initial = amplitudes_from_left_weight(p)
    else:
        initial = WeightPair(p, 1.0 - p)
    scenario = Scenario(mode, Topology.BOTH_CONNECTED, splitter, initial,
                        max_steps=n_steps)
    return iterate(scenario).w_left_series()


def reference_sequences() -> ReferenceReport:
    """Recompute the three canonical runs and compare with the table."""
    sequences = []
    all_ok = True
    for name, mode, p, reference, tolerances, note in _REFERENCE_TABLE:
        series = _canonical_w_left_series(mode, p, n_steps=5)
        steps = tuple(range(2, 6))
        computed = tuple(series[n - 1] for n in steps)
        deviations = tuple(abs(c - float(r))
                           for c, r in zip(computed, reference))
        within = all(d <= t for d, t in zip(deviations, tolerances))
        all_ok = all_ok and within
        sequences.append(SequenceComparison(
            name, mode, p, steps, computed, reference, tolerances,
            deviations, max(deviations), within, note))
    return ReferenceReport(tuple(sequences), all_ok)


@dataclass(frozen=True)
class SpeedComparison:
    """Steps to reach the balanced state in each mode, same initial weight."""

    w_left_initial: float
    epsilon: float
    unitary_steps: int | NotConverged
    measurement_steps: int | NotConverged
    ratio: float | None  # measurement / unitary when both converged


def compare_modes(w_left_initial: float, epsilon: float,
                  max_steps: int = 10000,
                  splitter: SplitterCoefficients | None = None,
                  ) -> SpeedComparison:
    """Race the two interaction modes from the same initial left weight.

    By default the splitter is tied to the initial condition (a1^2 equals
    the initial weight), matching how the initial state is prepared in the
    first place; pass an explicit splitter to untie the movable-splitter
    run from it.
    """
    if not 0.0 <= w_left_initial <= 1.0:
        raise OutOfRangeError(
            f"w_left_initial out of range: {w_left_initial!r} not in [0, 1]")
    if w_left_initial in (0.0, 1.0):
        raise DegenerateInitialError(
            "pure initial states never relax; w_left_initial must be "
            "strictly inside (0, 1)")
    if splitter is None:
        splitter = SplitterCoefficients.from_reflectance(w_left_initial)
    criterion = ConvergenceCriterion(_BALANCED, epsilon)
    unitary = steps_to_converge(
        Scenario(InteractionMode.FIXED_SPLITTER, Topology.BOTH_CONNECTED,
                 splitter, amplitudes_from_left_weight(w_left_initial),
                 max_steps=max_steps),
        criterion)
    measurement = steps_to_converge(
        Scenario(InteractionMode.MOVABLE_SPLITTER, Topology.BOTH_CONNECTED,
                 splitter, WeightPair(w_left_initial, 1.0 - w_left_initial),
                 max_steps=max_steps),
        criterion)
    ratio = None
    if isinstance(unitary, int) and isinstance(measurement, int):
        # the coherent route is never slower than the measuring one
        assert unitary <= measurement, (unitary, measurement)
        ratio = measurement / unitary
    return SpeedComparison(w_left_initial, epsilon, unitary, measurement,
                           ratio)


@dataclass(frozen=True)
class SweepCell:
    w_initial: float
    converged: bool
    steps: int | None
    final_w_left: float
    final_w_right: float


@dataclass(frozen=True)
class SweepResult:
    cells: tuple[SweepCell, ...]
    mode: InteractionMode
    topology: Topology
    splitter: SplitterCoefficients | None
    epsilon: float
    max_steps: int
    target: WeightPair


def sweep_initial_conditions(mode: InteractionMode, topology: Topology,
                             grid: Sequence[float], epsilon: float,
                             max_steps: int = 1000,
                             splitter: SplitterCoefficients | None = None,
                             ) -> SweepResult:
    """Convergence census over a grid of initial left weights.

    The target is the attracting state of the chosen (mode, topology) map.
    Movable-splitter sweeps need an explicit splitter, shared by all cells;
    fixed-splitter cells derive their initial amplitudes from the cell
    weight, and the splitter argument is recorded but never read by the
    map. Per cell, the reported weights are taken at the converging step,
    or at max_steps when the run never meets the criterion.
    """
    if not grid:
        raise OutOfRangeError("grid is empty")
    previous = 0.0
    for w in grid:
        if not 0.0 < w < 1.0:
            raise OutOfRangeError(
                f"grid values must lie strictly inside (0, 1), got {w!r}")
        if w <= previous:
            raise OutOfRangeError(
                f"grid must be strictly increasing, got {w!r} after "
                f"{previous!r}")
        previous = w
    if mode is InteractionMode.MOVABLE_SPLITTER and splitter is None:
        raise ModeMismatchError(
            "movable-splitter sweeps need explicit splitter coefficients")
    target_state = stable_fixed_point(mode, topology)
    target = (weights_of(target_state)
              if isinstance(target_state, AmplitudePair) else target_state)
    criterion = ConvergenceCriterion(target, epsilon)
    cells = []
    for w in grid:
        if mode is InteractionMode.FIXED_SPLITTER:
            initial = amplitudes_from_left_weight(w)
            cell_splitter = splitter or SplitterCoefficients.from_reflectance(w)
        else:
            initial = WeightPair(w, 1.0 - w)
            cell_splitter = splitter
        trajectory = iterate(Scenario(mode, topology, cell_splitter, initial,
                                      max_steps=max_steps))
        steps = None
        for record in trajectory.records:
            if criterion.satisfied(record.weights):
                steps = record.n
                break
        at = trajectory.records[steps - 1] if steps else trajectory.final
        cells.append(SweepCell(w, steps is not None, steps,
                               at.weights.w_left, at.weights.w_right))
    return SweepResult(tuple(cells), mode, topology, splitter, epsilon,
                       max_steps, target)


def convergence_order(w_initial: float = 0.6, floor: float = 1e-13,
                      max_iterations: int = 60) -> float:
    """Log-log slope of successive distances to the balanced fixed point.

    Iterates the both-connected fixed-splitter weight map and fits
    log d(n+1) against log d(n) by least squares, using only distances
    above the floor so float noise near the fixed point is excluded. A
    slope of 2 means squared-error (quadratic) convergence.
    """
    if w_initial in (0.0, 0.5, 1.0):
        raise DegenerateInitialError(
            "w_initial must differ from the fixed points 0, 1/2 and 1")
    if not 0.0 < w_initial < 1.0:
        raise OutOfRangeError(
            f"w_initial out of range: {w_initial!r} not in (0, 1)")
    step = induced_weight_map(InteractionMode.FIXED_SPLITTER,
                              Topology.BOTH_CONNECTED)
    w = w_initial
    distances = []
    for _ in range(max_iterations):
        d = abs(w - 0.5)
        if d <= floor:
            break
        distances.append(d)
        w = step(w)
    if len(distances) < 3:
        raise OutOfRangeError(
            "not enough usable iterates above the noise floor to fit a slope")
    logs = np.log(np.asarray(distances))
    slope, _ = np.polyfit(logs[:-1], logs[1:], 1)
    return float(slope)
