"""Deterministic multi-step evolution with optional topology switching.

Step indexing starts at n = 1, which is the state immediately after the
first splitter interaction; applying a map advances n by one. Each record
is stamped with the physical time n * period, one loop traversal per step.

A topology switch scheduled at step n takes effect before the map that
produces record n, so record n is the first one computed under (and
labeled with) the new wiring. Interaction modes never switch mid-run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from . import maps
from .errors import (ModeMismatchError, OutOfRangeError,
                     ScheduleConflictError)
from .states import (AmplitudePair, InteractionMode, SplitterCoefficients,
                     Topology, WeightPair, weights_of)

State = Union[AmplitudePair, WeightPair]


@dataclass(frozen=True)
class Scenario:
    """Everything needed to reproduce one run."""

    mode: InteractionMode
    initial_topology: Topology
    splitter: SplitterCoefficients
    initial: State
    max_steps: int
    period: float = 1.0  # loop traversal time T

    def __post_init__(self) -> None:
        if self.mode is InteractionMode.FIXED_SPLITTER:
            if not isinstance(self.initial, AmplitudePair):
                raise ModeMismatchError(
                    "fixed-splitter scenarios start from an AmplitudePair")
        elif not isinstance(self.initial, WeightPair):
            raise ModeMismatchError(
                "movable-splitter scenarios start from a WeightPair")
        if not isinstance(self.max_steps, int) or self.max_steps < 1:
            raise OutOfRangeError(
                f"max_steps must be an integer >= 1, got {self.max_steps!r}")
        if not self.period > 0.0:
            raise OutOfRangeError(
                f"period must be positive, got {self.period!r}")


@dataclass(frozen=True)
class StepSchedule:
    """Ordered topology switches as (switch_at_step, new_topology) pairs."""

    switches: tuple[tuple[int, Topology], ...] = ()

    def __post_init__(self) -> None:
        last = 0
        for step, topology in self.switches:
            if not isinstance(step, int) or step < 1:
                raise ScheduleConflictError(
                    f"switch step must be an integer >= 1, got {step!r}")
            if step <= last:
                raise ScheduleConflictError(
                    f"switch steps must be strictly increasing, got {step} "
                    f"after {last}")
            if not isinstance(topology, Topology):
                raise ScheduleConflictError(
                    f"switch target must be a Topology, got {topology!r}")
            last = step


@dataclass(frozen=True)
class TrajectoryRecord:
    """State after pass n. Amplitudes are None in movable-splitter runs."""

    n: int
    time: float
    topology: Topology
    amplitudes: AmplitudePair | None
    weights: WeightPair


@dataclass(frozen=True)
class Trajectory:
    records: tuple[TrajectoryRecord, ...]

    @property
    def final(self) -> TrajectoryRecord:
        return self.records[-1]

    def w_left_series(self) -> list[float]:
        return [r.weights.w_left for r in self.records]


@dataclass(frozen=True)
class ConvergenceCriterion:
    """Max-abs distance of the weight pair from a target, strict epsilon."""

    target: WeightPair
    epsilon: float

    def __post_init__(self) -> None:
        if not self.epsilon > 0.0:
            raise OutOfRangeError(
                f"epsilon must be positive, got {self.epsilon!r}")

    def distance(self, weights: WeightPair) -> float:
        return max(abs(weights.w_left - self.target.w_left),
                   abs(weights.w_right - self.target.w_right))

    def satisfied(self, weights: WeightPair) -> bool:
        return self.distance(weights) < self.epsilon


@dataclass(frozen=True)
class NotConverged:
    """Returned when a run exhausts max_steps; not an error."""

    steps: int
    final_distance: float


def _check_schedule(schedule: StepSchedule, max_steps: int) -> None:
    if schedule.switches and schedule.switches[-1][0] > max_steps:
        raise ScheduleConflictError(
            f"switch at step {schedule.switches[-1][0]} exceeds max_steps "
            f"{max_steps}")


def _records(scenario: Scenario,
             schedule: StepSchedule) -> Iterator[TrajectoryRecord]:
    switch_at = dict(schedule.switches)
    topology = scenario.initial_topology
    unitary = scenario.mode is InteractionMode.FIXED_SPLITTER
    amplitudes = scenario.initial if unitary else None
    weights = weights_of(amplitudes) if unitary else scenario.initial
    for n in range(1, scenario.max_steps + 1):
        if n in switch_at:
            topology = switch_at[n]
        if n > 1:
            step = maps.StepMap(scenario.mode, topology, scenario.splitter)
            if unitary:
                amplitudes = step.apply(amplitudes)
                weights = weights_of(amplitudes)
            else:
                weights = step.apply(weights)
        yield TrajectoryRecord(n, n * scenario.period, topology,
                               amplitudes, weights)


def iterate(scenario: Scenario,
            schedule: StepSchedule | None = None) -> Trajectory:
    """Run the scenario for exactly max_steps records.

    Pure and deterministic: the same arguments give bit-identical
    trajectories, and any prefix of a longer run matches the shorter run.
    """
    schedule = schedule if schedule is not None else StepSchedule()
    _check_schedule(schedule, scenario.max_steps)
    return Trajectory(tuple(_records(scenario, schedule)))


def steps_to_converge(scenario: Scenario,
                      criterion: ConvergenceCriterion,
                      schedule: StepSchedule | None = None,
                      ) -> int | NotConverged:
    """Smallest step index whose record meets the criterion.

    Scans the run lazily and stops at the first satisfying record; returns
    NotConverged carrying the final distance when max_steps runs out.
    """
    schedule = schedule if schedule is not None else StepSchedule()
    _check_schedule(schedule, scenario.max_steps)
    distance = float("inf")
    for record in _records(scenario, schedule):
        distance = criterion.distance(record.weights)
        if distance < criterion.epsilon:
            return record.n
    return NotConverged(scenario.max_steps, distance)


def run_switching_experiment(phases: Sequence[tuple[Topology, int]],
                             mode: InteractionMode,
                             splitter: SplitterCoefficients,
                             initial: State,
                             period: float = 1.0) -> Trajectory:
    """Run consecutive topology phases, each lasting a given number of steps.

    phases is a non-empty sequence of (topology, step_count) pairs; the
    total record count is the sum of the phase lengths. Equivalent to a
    single iterate call with the merged switch schedule.
    """
    if not phases:
        raise ScheduleConflictError("at least one phase is required")
    for topology, count in phases:
        if not isinstance(count, int) or count < 1:
            raise ScheduleConflictError(
                f"phase length must be an integer >= 1, got {count!r}")
    total = sum(count for _, count in phases)
    switches = []
    elapsed = phases[0][1]
    for topology, count in phases[1:]:
        switches.append((elapsed + 1, topology))
        elapsed += count
    scenario = Scenario(mode, phases[0][0], splitter, initial,
                        max_steps=total, period=period)
    return iterate(scenario, StepSchedule(tuple(switches)))
