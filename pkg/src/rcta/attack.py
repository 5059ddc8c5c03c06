"""Scripted misbehaving-sensor broadcasts.

A faulty sensor ignores the estimation protocol entirely and broadcasts
whatever its script dictates.  Scripts see only the round index and (for the
per-edge kind) the receiving node, never any normal sensor's state; given
identical parameters and seeds they replay identical streams.
"""

from __future__ import annotations

import numpy as np


class ConstantAttack:
    kind = "constant"

    def __init__(self, value):
        self.value = np.asarray(value, dtype=float)

    def at(self, k: int, receiver: int | None = None) -> np.ndarray:
        return self.value.copy()


class RampAttack:
    """offset + slope * k, per coordinate."""

    kind = "ramp"

    def __init__(self, offset, slope):
        self.offset = np.asarray(offset, dtype=float)
        self.slope = np.asarray(slope, dtype=float)
        if self.offset.shape != self.slope.shape:
            raise ValueError("offset and slope must have equal length")

    def at(self, k: int, receiver: int | None = None) -> np.ndarray:
        return self.offset + self.slope * k


class SinusoidAttack:
    """offset + slope * k + amplitude * sin(omega * k + phase), per coordinate.

    The optional slope lets one script drift in some coordinates while
    oscillating in others.
    """

    kind = "sinusoid"

    def __init__(self, offset, amplitude, omega, phase=None, slope=None):
        self.offset = np.asarray(offset, dtype=float)
        self.amplitude = np.asarray(amplitude, dtype=float)
        self.omega = np.asarray(omega, dtype=float)
        d = self.offset.shape
        self.phase = np.zeros(d) if phase is None else np.asarray(phase, dtype=float)
        self.slope = np.zeros(d) if slope is None else np.asarray(slope, dtype=float)
        for name, arr in (("amplitude", self.amplitude), ("omega", self.omega),
                          ("phase", self.phase), ("slope", self.slope)):
            if arr.shape != d:
                raise ValueError(f"{name} must match offset length {d[0]}")

    def at(self, k: int, receiver: int | None = None) -> np.ndarray:
        return self.offset + self.slope * k + self.amplitude * np.sin(self.omega * k + self.phase)


class RandomUniformAttack:
    """Independent uniform draws keyed by (seed, round, receiver); stateless."""

    kind = "random-uniform"

    def __init__(self, low, high, seed: int):
        self.low = np.asarray(low, dtype=float)
        self.high = np.asarray(high, dtype=float)
        if self.low.shape != self.high.shape:
            raise ValueError("low and high must have equal length")
        if np.any(self.low > self.high):
            raise ValueError("low must not exceed high")
        self.seed = int(seed)

    def at(self, k: int, receiver: int | None = None) -> np.ndarray:
        key = (self.seed, int(k), 0 if receiver is None else int(receiver) + 1)
        rng = np.random.default_rng(key)
        return rng.uniform(self.low, self.high)


class TableAttack:
    """Cycles through an explicit table of vectors."""

    kind = "custom-table"

    def __init__(self, rows):
        self.rows = [np.asarray(r, dtype=float) for r in rows]
        if not self.rows:
            raise ValueError("table must contain at least one row")

    def at(self, k: int, receiver: int | None = None) -> np.ndarray:
        return self.rows[k % len(self.rows)].copy()


class ReplayAttack:
    """Re-broadcasts recorded rows with a delay, clamped at both ends."""

    kind = "replay"

    def __init__(self, rows, delay: int = 0):
        self.rows = [np.asarray(r, dtype=float) for r in rows]
        if not self.rows:
            raise ValueError("replay needs at least one recorded row")
        if delay < 0:
            raise ValueError(f"delay must be nonnegative, got {delay}")
        self.delay = int(delay)

    def at(self, k: int, receiver: int | None = None) -> np.ndarray:
        idx = min(max(k - self.delay, 0), len(self.rows) - 1)
        return self.rows[idx].copy()


class PerEdgeAttack:
    """Worst-case equivocation: a different sub-script per out-neighbor.

    Broadcast queries (receiver None) fall back to the default sub-script, as
    do receivers without a dedicated entry.
    """

    kind = "per-edge"

    def __init__(self, default, per_receiver: dict | None = None):
        self.default = default
        self.per_receiver = dict(per_receiver or {})

    def at(self, k: int, receiver: int | None = None) -> np.ndarray:
        script = self.per_receiver.get(receiver, self.default) if receiver is not None else self.default
        return script.at(k)


def attack_broadcast(script, k: int, receiver: int | None = None) -> np.ndarray:
    """Estimate vector a faulty sensor sends at round k (to one receiver, or
    as a plain broadcast when receiver is None)."""
    if k < 0:
        raise ValueError(f"round index must be nonnegative, got {k}")
    return script.at(k, receiver)
