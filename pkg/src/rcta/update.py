"""Per-sensor resilient combine-then-adapt update.

Each round a normal sensor, independently for every coordinate l:

  1. sorts the in-neighbor estimates by their l-th entry and discards the f
     smallest and f largest (all of them if fewer than f remain at a stage);
  2. forms a convex combination of its own l-th entry and the retained ones,
     every weight bounded below by a positive floor and summing to one
     (falls back to its own value when nothing is retained);
  3. applies a least-mean-squares correction driven by the scalarized
     measurement pair (y_bar[l], delta).

The combination keeps the new value inside the interval spanned by the
sensor's own entry and its *normal* in-neighbors' entries whenever at most f
inbox values are faulty; the adaptation then shrinks the error by
nu = mu / (mu + delta^2) <= 1.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np

from .drem import DremTriple

NORMAL = "normal"
FAULTY = "faulty"


class ContractViolation(RuntimeError):
    """A combination-weight assignment broke its declared constraints."""


@dataclass(frozen=True)
class SensorState:
    estimate: np.ndarray
    mu: float
    role: str = NORMAL

    def __post_init__(self):
        if self.role not in (NORMAL, FAULTY):
            raise ValueError(f"role must be '{NORMAL}' or '{FAULTY}', got {self.role!r}")
        if self.role == NORMAL and not self.mu > 0:
            raise ValueError(f"normal sensors need mu > 0, got {self.mu}")
        object.__setattr__(self, "estimate", np.asarray(self.estimate, dtype=float))
        if not np.all(np.isfinite(self.estimate)):
            raise ValueError("estimate entries must be finite")


@dataclass(frozen=True)
class CombinationWeights:
    """Weights for one coordinate: self weight plus one weight per retained sender."""

    self_weight: float
    neighbor_weights: Mapping[int, float]
    floor: float  # declared positive lower bound on every weight


class UniformWeights:
    """Equal weights 1 / (1 + #retained) on the sensor itself and each survivor."""

    name = "uniform"

    def weights(self, coord: int, retained_senders: tuple[int, ...]) -> CombinationWeights:
        w = 1.0 / (1 + len(retained_senders))
        return CombinationWeights(self_weight=w, neighbor_weights={j: w for j in retained_senders}, floor=w)


def trim(inbox: Mapping[int, np.ndarray], f: int, coord: int) -> list[tuple[int, float]]:
    """Survivors of the coordinate-wise trim, as (sender, value) pairs.

    Sorted ascending by value; equal values order by lower sender id so
    traces are reproducible.  The sensor's own estimate is never part of the
    inbox and is never trimmed.
    """
    if f < 0:
        raise ValueError(f"f must be nonnegative, got {f}")
    pts = sorted(((float(v[coord]), j) for j, v in inbox.items()))
    pts = [] if len(pts) < f else pts[f:]
    pts = [] if len(pts) < f else pts[: len(pts) - f]
    return [(j, v) for v, j in pts]


def resilient_combine(
    own: float, retained: list[tuple[int, float]], weights: CombinationWeights | None
) -> float:
    """Convex combination of own value and retained values; own value alone
    when nothing survived the trim."""
    if not retained:
        return float(own)
    if weights is None:
        raise ContractViolation("weights required when the retained set is nonempty")
    senders = [j for j, _ in retained]
    if set(weights.neighbor_weights) != set(senders):
        raise ContractViolation(
            f"weights must cover exactly the retained senders {sorted(senders)}, "
            f"got {sorted(weights.neighbor_weights)}"
        )
    if not weights.floor > 0:
        raise ContractViolation(f"weight floor must be positive, got {weights.floor}")
    all_w = [weights.self_weight] + [weights.neighbor_weights[j] for j in senders]
    if min(all_w) < weights.floor:
        raise ContractViolation(f"weight {min(all_w)} below the declared floor {weights.floor}")
    total = sum(all_w)
    if abs(total - 1.0) > 1e-12:
        raise ContractViolation(f"weights must sum to 1, got {total!r}")
    acc = weights.self_weight * float(own)
    for j, v in retained:
        acc += weights.neighbor_weights[j] * v
    return acc


def adapt(combined: float, y_bar_l: float, delta: float, mu: float) -> float:
    """Least-mean-squares correction; a no-op at delta = 0 and a fixed point
    at the truth (where y_bar_l = delta * combined)."""
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu}")
    return combined + delta / (mu + delta * delta) * (y_bar_l - delta * combined)


def sensor_step(
    state: SensorState,
    inbox: Mapping[int, np.ndarray],
    triple: DremTriple,
    f: int,
    policy,
) -> tuple[SensorState, tuple[tuple[int, ...], ...]]:
    """One full round for a normal sensor: trim, combine, adapt per coordinate.

    Returns the successor state and, per coordinate, the ids whose values
    survived the trim (for trace auditing).
    """
    if state.role != NORMAL:
        raise ValueError("sensor_step applies to normal sensors only")
    d = len(state.estimate)
    new = np.empty(d)
    retained_ids: list[tuple[int, ...]] = []
    for coord in range(d):
        kept = trim(inbox, f, coord)
        senders = tuple(j for j, _ in kept)
        cw = policy.weights(coord, senders) if kept else None
        combined = resilient_combine(float(state.estimate[coord]), kept, cw)
        new[coord] = adapt(combined, float(triple.y_bar[coord]), triple.delta, state.mu)
        retained_ids.append(senders)
    return replace(state, estimate=new), tuple(retained_ids)
