"""Single-pass step maps of the photon / splitter / fiber-loop system.

Six maps cover {fixed splitter, movable splitter} x {both loops connected,
right half-connected, left half-connected}.

Fixed-splitter (unitary) maps act on amplitude pairs. With both loops
connected, one pass sends (a, b) to

    a' = 1 / (1 + 4 a^2 b^2)^(1/2)
    b' = 2 a b / (1 + 4 a^2 b^2)^(1/2)

Note the nonlinear renormalization: the recombination at the splitter is
deliberately kept in this form, with the growing component folded back and
the state rescaled to unit norm on every pass. Do not "simplify" this to a
linear rotation; the whole convergence behavior lives in that denominator.
With the right loop cut open the passing component is captured there and
only the reflected one keeps interacting:

    a' = a^2 / D,   b' = b (1 + a) / D,   D = (a^4 + b^2 (1 + a)^2)^(1/2)

The left half-connected map is the exact mirror (swap roles of a and b).

Movable-splitter (measuring) maps act on weight pairs; each pass re-splits
the classical probability with the splitter coefficients:

    both connected:       w_L' = a1^2 w_L + b1^2 w_R,   w_R' = 1 - w_L'
    right half-connected: w_L' = a1^2 w_L,              w_R' = b1^2 w_L + w_R
    left half-connected:  w_L' = a1^2 w_R + w_L,        w_R' = b1^2 w_R

The both-connected form is a two-state Markov chain with column-stochastic
matrix [[a1^2, b1^2], [b1^2, a1^2]]; the half-connected forms are absorbing
chains. Fixed-splitter maps ignore the splitter after the initial state has
been formed, movable-splitter maps use it on every pass.

The *_kernel functions hold the raw arithmetic and accept floats or numpy
arrays; the step_* wrappers add typed validation on scalars.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Union

import numpy as np

from .errors import (InvalidStepError, ModeMismatchError, NumericDomainError,
                     OutOfRangeError)
from .states import (AmplitudePair, InteractionMode, SplitterCoefficients,
                     Topology, WeightPair)

# Denominator guard for the half-connected unitary maps. Unreachable from a
# normalized state (D >= 1 there), kept as a hard stop for raw kernel input.
_MIN_DENOMINATOR = 1e-30

# Agreement bound between the direct update and its transition-matrix form.
_MARKOV_AGREEMENT = 1e-15


def unitary_both_kernel(a, b):
    """Raw both-connected unitary update; returns (a', b')."""
    d = np.sqrt(1.0 + 4.0 * (a * a) * (b * b))
    return 1.0 / d, (2.0 * a) * b / d


def unitary_right_half_kernel(a, b):
    """Raw right-half-connected unitary update; returns (a', b')."""
    d = np.sqrt((a * a) * (a * a) + (b * b) * (1.0 + a) ** 2)
    if np.any(d < _MIN_DENOMINATOR):
        raise NumericDomainError(
            "right-half denominator underflow: |D| < 1e-30")
    return (a * a) / d, b * (1.0 + a) / d


def unitary_left_half_kernel(a, b):
    """Raw left-half-connected unitary update, the mirror of the right one.

    Written with the same expression shapes as unitary_right_half_kernel so
    that the mirror identity holds bit for bit, not merely to rounding.
    """
    d = np.sqrt((b * b) * (b * b) + (a * a) * (1.0 + b) ** 2)
    if np.any(d < _MIN_DENOMINATOR):
        raise NumericDomainError(
            "left-half denominator underflow: |D| < 1e-30")
    return a * (1.0 + b) / d, (b * b) / d


def measure_both_kernel(w_left, w_right, a1_squared, b1_squared):
    """Raw both-connected measuring update; returns (w_L', w_R')."""
    wl = a1_squared * w_left + b1_squared * w_right
    return wl, 1.0 - wl


def measure_right_half_kernel(w_left, w_right, a1_squared, b1_squared):
    """Raw right-half-connected measuring update (right loop absorbs)."""
    return a1_squared * w_left, b1_squared * w_left + w_right


def measure_left_half_kernel(w_left, w_right, a1_squared, b1_squared):
    """Raw left-half-connected measuring update (left loop absorbs)."""
    return a1_squared * w_right + w_left, b1_squared * w_right


def step_unitary_both(state: AmplitudePair) -> AmplitudePair:
    """One fixed-splitter pass with both loops connected."""
    a_next, b_next = unitary_both_kernel(state.a_left, state.b_right)
    return AmplitudePair(float(a_next), float(b_next))


def step_unitary_right_half(state: AmplitudePair) -> AmplitudePair:
    """One fixed-splitter pass with the right loop cut open."""
    a_next, b_next = unitary_right_half_kernel(state.a_left, state.b_right)
    return AmplitudePair(float(a_next), float(b_next))


def step_unitary_left_half(state: AmplitudePair) -> AmplitudePair:
    """One fixed-splitter pass with the left loop cut open."""
    a_next, b_next = unitary_left_half_kernel(state.a_left, state.b_right)
    return AmplitudePair(float(a_next), float(b_next))


def step_measure_both(weights: WeightPair,
                      splitter: SplitterCoefficients) -> WeightPair:
    """One movable-splitter pass with both loops connected.

    The update is evaluated both directly and through the transition-matrix
    row for the right loop; the two must agree to 1e-15 or the step aborts.
    """
    a1sq = splitter.a1_squared
    b1sq = splitter.b1_squared
    wl, wr = measure_both_kernel(weights.w_left, weights.w_right, a1sq, b1sq)
    matrix_row_right = b1sq * weights.w_left + a1sq * weights.w_right
    if abs(matrix_row_right - wr) > _MARKOV_AGREEMENT:
        raise NumericDomainError(
            "direct and transition-matrix forms disagree: "
            f"|{matrix_row_right!r} - {wr!r}| > 1e-15")
    return WeightPair(float(wl), float(wr))


def step_measure_right_half(weights: WeightPair,
                            splitter: SplitterCoefficients) -> WeightPair:
    """One movable-splitter pass with the right loop absorbing."""
    wl, wr = measure_right_half_kernel(weights.w_left, weights.w_right,
                                       splitter.a1_squared,
                                       splitter.b1_squared)
    return WeightPair(float(wl), float(wr))


def step_measure_left_half(weights: WeightPair,
                           splitter: SplitterCoefficients) -> WeightPair:
    """One movable-splitter pass with the left loop absorbing."""
    wl, wr = measure_left_half_kernel(weights.w_left, weights.w_right,
                                      splitter.a1_squared,
                                      splitter.b1_squared)
    return WeightPair(float(wl), float(wr))


State = Union[AmplitudePair, WeightPair]


@dataclass(frozen=True)
class StepMap:
    """Uniform handle on one (mode, topology) update rule.

    The splitter is carried for every mode so call sites stay uniform;
    fixed-splitter maps simply never read it.
    """

    mode: InteractionMode
    topology: Topology
    splitter: SplitterCoefficients

    def apply(self, state: State) -> State:
        if self.mode is InteractionMode.FIXED_SPLITTER:
            if not isinstance(state, AmplitudePair):
                raise ModeMismatchError(
                    "fixed-splitter maps act on AmplitudePair, got "
                    f"{type(state).__name__}")
            if self.topology is Topology.BOTH_CONNECTED:
                return step_unitary_both(state)
            if self.topology is Topology.RIGHT_HALF_CONNECTED:
                return step_unitary_right_half(state)
            return step_unitary_left_half(state)
        if not isinstance(state, WeightPair):
            raise ModeMismatchError(
                "movable-splitter maps act on WeightPair, got "
                f"{type(state).__name__}")
        if self.topology is Topology.BOTH_CONNECTED:
            return step_measure_both(state, self.splitter)
        if self.topology is Topology.RIGHT_HALF_CONNECTED:
            return step_measure_right_half(state, self.splitter)
        return step_measure_left_half(state, self.splitter)


class Stability(Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    SUPERATTRACTING = "superattracting"


@dataclass(frozen=True)
class FixedPoint:
    """An invariant state of one (mode, topology) map, with its character."""

    point: State
    stability: Stability
    absorbing: bool = False


_SQRT_HALF = math.sqrt(0.5)


def fixed_points(mode: InteractionMode,
                 topology: Topology) -> tuple[FixedPoint, ...]:
    """Analytically known fixed points of the chosen map.

    Movable-splitter entries hold for any non-degenerate splitter (both
    coefficients nonzero), which is why no splitter argument appears here.

    With both loops connected the fixed-splitter map has exactly two fixed
    points: the balanced superposition, which is superattracting, and the
    all-reflected state (1, 0), which is unstable. The all-passing state
    (0, 1) is not invariant; a single pass sends it to (1, 0), since with
    b = 1 the recombination puts the full recombined amplitude on the
    reflected side.
    """
    if mode is InteractionMode.FIXED_SPLITTER:
        if topology is Topology.BOTH_CONNECTED:
            return (
                FixedPoint(AmplitudePair(_SQRT_HALF, _SQRT_HALF),
                           Stability.SUPERATTRACTING),
                FixedPoint(AmplitudePair(1.0, 0.0), Stability.UNSTABLE),
            )
        if topology is Topology.RIGHT_HALF_CONNECTED:
            return (
                FixedPoint(AmplitudePair(0.0, 1.0), Stability.STABLE),
                FixedPoint(AmplitudePair(1.0, 0.0), Stability.UNSTABLE),
            )
        return (
            FixedPoint(AmplitudePair(1.0, 0.0), Stability.STABLE),
            FixedPoint(AmplitudePair(0.0, 1.0), Stability.UNSTABLE),
        )
    if topology is Topology.BOTH_CONNECTED:
        return (FixedPoint(WeightPair(0.5, 0.5), Stability.STABLE),)
    if topology is Topology.RIGHT_HALF_CONNECTED:
        return (FixedPoint(WeightPair(0.0, 1.0), Stability.STABLE,
                           absorbing=True),)
    return (FixedPoint(WeightPair(1.0, 0.0), Stability.STABLE,
                       absorbing=True),)


def stable_fixed_point(mode: InteractionMode, topology: Topology) -> State:
    """The unique attracting state of the chosen map."""
    for fp in fixed_points(mode, topology):
        if fp.stability is not Stability.UNSTABLE:
            return fp.point
    raise NumericDomainError("no stable fixed point listed")  # unreachable


def closed_form_measure_both(w_left_initial: float,
                             splitter: SplitterCoefficients,
                             n: int) -> float:
    """Left weight after n passes of the both-connected measuring map.

    Geometric contraction toward 1/2:

        w_L(n) = 1/2 + (w_L(1) - 1/2) (a1^2 - b1^2)^(n - 1)

    Step 1 is the initial weight itself. Serves as an independent check on
    the iterated map; the two agree to high accuracy for n up to hundreds.
    """
    if n < 1:
        raise InvalidStepError(f"step index must be >= 1, got {n!r}")
    if not 0.0 <= w_left_initial <= 1.0:
        raise OutOfRangeError(
            f"w_left_initial out of range: {w_left_initial!r} not in [0, 1]")
    ratio = splitter.a1_squared - splitter.b1_squared
    return 0.5 + (w_left_initial - 0.5) * ratio ** (n - 1)


def closed_form_measure_right_half(w_left_initial: float,
                                   splitter: SplitterCoefficients,
                                   n: int) -> float:
    """Left weight after n passes with the right loop absorbing.

    Pure geometric decay: w_L(n) = w_L(1) * (a1^2)^(n - 1).
    """
    if n < 1:
        raise InvalidStepError(f"step index must be >= 1, got {n!r}")
    if not 0.0 <= w_left_initial <= 1.0:
        raise OutOfRangeError(
            f"w_left_initial out of range: {w_left_initial!r} not in [0, 1]")
    return w_left_initial * splitter.a1_squared ** (n - 1)


def induced_weight_map(mode: InteractionMode, topology: Topology,
                       splitter: SplitterCoefficients | None = None,
                       ) -> Callable[[float], float]:
    """The one-dimensional map w_L -> w_L' induced on the left weight.

    For fixed-splitter dynamics this is the weight image of the amplitude
    update; the closures evaluate the algebraic form directly so they can
    be probed slightly outside [0, 1] where the expression still makes
    sense (finite-difference derivatives at the ends of the interval).
    Movable-splitter maps require the splitter argument.
    """
    if mode is InteractionMode.FIXED_SPLITTER:
        if topology is Topology.BOTH_CONNECTED:
            return lambda w: 1.0 / (1.0 + 4.0 * w * (1.0 - w))
        if topology is Topology.RIGHT_HALF_CONNECTED:
            def right(w: float) -> float:
                s = math.sqrt(w)  # raises ValueError left of 0
                return w * w / (w * w + (1.0 - w) * (1.0 + s) ** 2)
            return right

        def left(w: float) -> float:
            s = math.sqrt(1.0 - w)  # raises ValueError right of 1
            return w * (1.0 + s) ** 2 / ((1.0 - w) ** 2
                                         + w * (1.0 + s) ** 2)
        return left
    if splitter is None:
        raise ModeMismatchError(
            "movable-splitter weight maps need the splitter coefficients")
    a1sq = splitter.a1_squared
    b1sq = splitter.b1_squared
    if topology is Topology.BOTH_CONNECTED:
        return lambda w: a1sq * w + b1sq * (1.0 - w)
    if topology is Topology.RIGHT_HALF_CONNECTED:
        return lambda w: a1sq * w
    return lambda w: w + a1sq * (1.0 - w)


def map_derivative(f: Callable[[float], float], w: float,
                   h: float = 1e-6) -> float:
    """Finite-difference derivative of a 1-D map at w.

    Centered difference with step h wherever both probe points evaluate;
    falls back to a one-sided difference at a boundary where the map's
    algebraic form stops being real (square root of a negative number).
    """
    try:
        fp = f(w + h)
    except ValueError:
        fp = None
    try:
        fm = f(w - h)
    except ValueError:
        fm = None
    if fp is not None and fm is not None:
        return (fp - fm) / (2.0 * h)
    if fp is not None:
        return (fp - f(w)) / h
    if fm is not None:
        return (f(w) - fm) / h
    raise NumericDomainError(
        f"map not evaluable on either side of {w!r} with h={h!r}")
