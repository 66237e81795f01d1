"""Core value types for the photon / beam-splitter loop system.

Naming convention, fixed here and reused everywhere: the reflected
component of the photon travels the left fiber loop and is always written
first; the passing component travels the right loop and is written second.
Amplitudes are non-negative reals (relative phase is not modeled), weights
are classical probabilities.

All types are immutable. Constructors validate their raw inputs, then
rescale to an exact unit norm (or unit sum) so that downstream arithmetic
never has to compensate for decimal rounding in hand-entered values. The
signed correction that was applied is kept on the instance for inspection
but does not participate in equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import NormalizationError, OutOfRangeError

# Hand-entered amplitude pairs are often quoted to three decimals, which can
# leave the squared norm off by a few 1e-4. Pairs within this tolerance are
# accepted and renormalized; anything worse is rejected as a real error.
AMPLITUDE_NORM_TOL = 1e-3

# Weight pairs come either from exact arithmetic or from decimal tables that
# sum to 1 exactly, so the acceptance band is much tighter.
WEIGHT_SUM_TOL = 1e-9

# Map outputs may undershoot zero by a rounding error; tolerate and clamp.
_RANGE_SLACK = 1e-12


class Topology(Enum):
    """Fiber wiring of the loop interferometer.

    BOTH_CONNECTED: both loops return their component to the splitter.
    RIGHT_HALF_CONNECTED: the right loop is cut open, so the passing
    component is captured there and only the reflected one keeps cycling.
    LEFT_HALF_CONNECTED: the mirror arrangement, capturing on the left.
    """

    BOTH_CONNECTED = "both"
    RIGHT_HALF_CONNECTED = "right-half"
    LEFT_HALF_CONNECTED = "left-half"


class InteractionMode(Enum):
    """How the splitter meets the photon on every pass.

    FIXED_SPLITTER keeps the splitter rigid, so each pass is a coherent
    (unitary-style) recombination of amplitudes. MOVABLE_SPLITTER lets the
    splitter recoil, which acts as a which-path measurement; the state is
    then a classical weight pair re-split on every pass.
    """

    FIXED_SPLITTER = "unitary"
    MOVABLE_SPLITTER = "measure"


@dataclass(frozen=True)
class Violation:
    """Structured description of a failed construction check."""

    kind: str  # "range" | "normalization" | "weight-sum"
    deviation: float
    message: str


def validate_amplitudes(a_left: float, b_right: float,
                        tol: float = AMPLITUDE_NORM_TOL) -> Violation | None:
    """Check a raw amplitude pair; return a Violation or None when fine."""
    for name, x in (("a_left", a_left), ("b_right", b_right)):
        if not math.isfinite(x):
            return Violation("range", float("nan"), f"{name} is not finite")
        if x < -_RANGE_SLACK:
            return Violation("range", x, f"{name} must be non-negative, got {x!r}")
    dev = a_left * a_left + b_right * b_right - 1.0
    if abs(dev) > tol:
        return Violation(
            "normalization", dev,
            f"squared norm {1.0 + dev!r} deviates from 1 by {dev!r}")
    return None


def validate_weights(w_left: float, w_right: float,
                     tol: float = WEIGHT_SUM_TOL) -> Violation | None:
    """Check a raw weight pair; return a Violation or None when fine."""
    for name, x in (("w_left", w_left), ("w_right", w_right)):
        if not math.isfinite(x):
            return Violation("range", float("nan"), f"{name} is not finite")
        if x < -_RANGE_SLACK:
            return Violation("range", x, f"{name} must be non-negative, got {x!r}")
    dev = w_left + w_right - 1.0
    if abs(dev) > tol:
        return Violation(
            "weight-sum", dev,
            f"weight sum {1.0 + dev!r} deviates from 1 by {dev!r}")
    return None


def _raise_for(violation: Violation) -> None:
    if violation.kind == "range":
        raise OutOfRangeError(violation.message)
    raise NormalizationError(violation)


@dataclass(frozen=True)
class AmplitudePair:
    """Superposition coefficients (reflected, passing) of the photon state.

    Both components live in [0, 1] and satisfy a_left^2 + b_right^2 = 1
    after construction. `norm_correction` records the signed deviation of
    the raw input norm from 1.
    """

    a_left: float
    b_right: float
    norm_correction: float = field(init=False, repr=False, compare=False,
                                   default=0.0)

    def __post_init__(self) -> None:
        a = float(self.a_left)
        b = float(self.b_right)
        violation = validate_amplitudes(a, b)
        if violation is not None:
            _raise_for(violation)
        a = 0.0 if a < 0.0 else a
        b = 0.0 if b < 0.0 else b
        norm = math.sqrt(a * a + b * b)
        object.__setattr__(self, "a_left", a / norm)
        object.__setattr__(self, "b_right", b / norm)
        object.__setattr__(self, "norm_correction", norm - 1.0)


@dataclass(frozen=True)
class WeightPair:
    """Classical statistical weights (left loop, right loop), summing to 1."""

    w_left: float
    w_right: float
    sum_correction: float = field(init=False, repr=False, compare=False,
                                  default=0.0)

    def __post_init__(self) -> None:
        wl = float(self.w_left)
        wr = float(self.w_right)
        violation = validate_weights(wl, wr)
        if violation is not None:
            _raise_for(violation)
        wl = 0.0 if wl < 0.0 else wl
        wr = 0.0 if wr < 0.0 else wr
        total = wl + wr
        object.__setattr__(self, "w_left", wl / total)
        object.__setattr__(self, "w_right", wr / total)
        object.__setattr__(self, "sum_correction", total - 1.0)


@dataclass(frozen=True)
class SplitterCoefficients:
    """Beam-splitter amplitudes: a1 reflects (left), b1 passes (right).

    Same validation and renormalization rules as AmplitudePair. The squared
    coefficients are the per-pass reflection and transmission probabilities.
    """

    a1: float
    b1: float
    norm_correction: float = field(init=False, repr=False, compare=False,
                                   default=0.0)

    def __post_init__(self) -> None:
        a = float(self.a1)
        b = float(self.b1)
        violation = validate_amplitudes(a, b)
        if violation is not None:
            _raise_for(violation)
        a = 0.0 if a < 0.0 else a
        b = 0.0 if b < 0.0 else b
        norm = math.sqrt(a * a + b * b)
        object.__setattr__(self, "a1", a / norm)
        object.__setattr__(self, "b1", b / norm)
        object.__setattr__(self, "norm_correction", norm - 1.0)

    @property
    def a1_squared(self) -> float:
        return self.a1 * self.a1

    @property
    def b1_squared(self) -> float:
        return self.b1 * self.b1

    @classmethod
    def from_reflectance(cls, a1_squared: float) -> "SplitterCoefficients":
        """Build from the reflection probability a1^2 in [0, 1]."""
        if not 0.0 <= a1_squared <= 1.0:
            raise OutOfRangeError(
                f"a1_squared out of range: {a1_squared!r} not in [0, 1]")
        return cls(math.sqrt(a1_squared), math.sqrt(1.0 - a1_squared))


def amplitudes_from_left_weight(w_left: float) -> AmplitudePair:
    """Amplitude pair (sqrt(w), sqrt(1 - w)) carrying weight w on the left."""
    if not 0.0 <= w_left <= 1.0:
        raise OutOfRangeError(
            f"w_left out of range: {w_left!r} not in [0, 1]")
    return AmplitudePair(math.sqrt(w_left), math.sqrt(1.0 - w_left))


def weights_of(state: AmplitudePair) -> WeightPair:
    """Statistical weights (a_left^2, b_right^2) of an amplitude pair."""
    return WeightPair(state.a_left * state.a_left,
                      state.b_right * state.b_right)
