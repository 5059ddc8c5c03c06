"""Regressor signals and the determinant-based scalarizing transform.

Each sensor observes y(k) = theta' phi(k).  Stacking the last d regressors
into a square matrix Phi(k) and multiplying the stacked measurements by
adj(Phi(k)) decouples the d-dimensional problem into d scalar ones:

    y_bar[l](k) = delta(k) * theta[l],   delta(k) = det(Phi(k)),

which holds for every coordinate l whenever the measurements obey the
regression model, including singular Phi (both sides are then 0-ish).
The adjugate is computed from explicit cofactor minors so the identity
Phi @ adj(Phi) = delta * I holds numerically even at delta = 0; windows
with fewer than d samples are padded with zero rows, which forces delta = 0
and y_bar = 0 exactly, so early rounds are inert for the adaptation.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np


def measure(theta: np.ndarray, phi: np.ndarray) -> float:
    """Noiseless scalar measurement theta' phi."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if theta.shape != phi.shape or theta.ndim != 1:
        raise ValueError(f"dimension mismatch: theta {theta.shape} vs phi {phi.shape}")
    return float(theta @ phi)


def _minor(m: np.ndarray, row: int, col: int) -> np.ndarray:
    keep_r = [q for q in range(m.shape[0]) if q != row]
    keep_c = [q for q in range(m.shape[1]) if q != col]
    return m[np.ix_(keep_r, keep_c)]


def det(m: np.ndarray) -> float:
    """Determinant via cofactor expansion along the first row.

    Exact zero for matrices containing a zero row (every expansion term
    carries a zero factor), which the zero-padded windows rely on.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"square matrix required, got shape {m.shape}")
    d = m.shape[0]
    if d == 1:
        return float(m[0, 0])
    if d == 2:
        return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    total = 0.0
    sign = 1.0
    for col in range(d):
        a = m[0, col]
        if a != 0.0:
            total += sign * a * det(_minor(m, 0, col))
        sign = -sign
    return total


def adjugate(m: np.ndarray) -> np.ndarray:
    """Transpose of the cofactor matrix; adj of a 1x1 matrix is [[1]].

    Satisfies m @ adjugate(m) = det(m) * I for every square m, singular
    included.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"square matrix required, got shape {m.shape}")
    d = m.shape[0]
    if d == 1:
        return np.ones((1, 1))
    adj = np.empty((d, d))
    for i in range(d):
        for j in range(d):
            sign = -1.0 if (i + j) % 2 else 1.0
            adj[j, i] = sign * det(_minor(m, i, j))
    return adj


@dataclass(frozen=True)
class DremTriple:
    """Per-round transform output: mixing matrix, mixed measurements, determinant."""

    phi_matrix: np.ndarray  # d x d, row q holds phi(k-q)'
    y_bar: np.ndarray       # adj(phi_matrix) @ stacked measurements
    delta: float            # det(phi_matrix)


class RegressorWindow:
    """Rolling buffer of the d most recent (phi, y) pairs, newest first."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError(f"capacity must be at least 1, got {capacity}")
        self.capacity = capacity
        self._slots: deque[tuple[np.ndarray, float]] = deque(maxlen=capacity)

    def push(self, phi: np.ndarray, y: float) -> None:
        phi = np.asarray(phi, dtype=float)
        if phi.shape != (self.capacity,):
            raise ValueError(f"regressor must have shape ({self.capacity},), got {phi.shape}")
        self._slots.appendleft((phi.copy(), float(y)))

    def __len__(self) -> int:
        return len(self._slots)

    def phi_matrix(self) -> np.ndarray:
        """Row q = regressor from q rounds ago; missing rows are zero."""
        d = self.capacity
        m = np.zeros((d, d))
        for q, (phi, _) in enumerate(self._slots):
            m[q] = phi
        return m

    def y_stack(self) -> np.ndarray:
        d = self.capacity
        y = np.zeros(d)
        for q, (_, yq) in enumerate(self._slots):
            y[q] = yq
        return y


def drem_transform(window: RegressorWindow) -> DremTriple:
    """Scalarize the windowed regression: y_bar = adj(Phi) y, delta = det(Phi)."""
    # Mixing matrix and measurement stack share the window index k throughout.
    phi = window.phi_matrix()
    return DremTriple(phi_matrix=phi, y_bar=adjugate(phi) @ window.y_stack(), delta=det(phi))


def pe_margin(deltas, t_window: int) -> float:
    """Smallest windowed energy min_k sum_{t=k}^{k+T-1} delta(t)^2.

    A sensor is persistently excited at level (T, Delta) when this margin is
    at least Delta.
    """
    sq = np.asarray(deltas, dtype=float) ** 2
    if t_window < 1:
        raise ValueError(f"t_window must be positive, got {t_window}")
    if sq.ndim != 1 or len(sq) < t_window:
        raise ValueError(f"need at least {t_window} values, got {len(sq)}")
    return float(np.min(np.convolve(sq, np.ones(t_window), mode="valid")))


class ConstantRegressor:
    """Same vector every round."""

    kind = "constant"

    def __init__(self, value):
        self.value = np.asarray(value, dtype=float)

    def at(self, k: int) -> np.ndarray:
        return self.value.copy()


class AlternatingRegressor:
    """Period-2 switching: one vector on even rounds, another on odd."""

    kind = "alternating-period-2"

    def __init__(self, even, odd):
        self.even = np.asarray(even, dtype=float)
        self.odd = np.asarray(odd, dtype=float)
        if self.even.shape != self.odd.shape:
            raise ValueError("even/odd vectors must have equal length")

    def at(self, k: int) -> np.ndarray:
        return (self.odd if k % 2 else self.even).copy()


class RecursiveCosineRegressor:
    """One slot carries the recursion a(t) = a(t-1) + cos(t * step), a(0) given.

    The recursion state is memoized so lazy evaluation and a from-scratch
    replay produce bit-identical values; instances are meant to live inside a
    single simulation context.
    """

    kind = "recursive-cosine"

    def __init__(self, base, slot: int, initial: float, angular_step: float):
        self.base = np.asarray(base, dtype=float)
        if not (0 <= slot < len(self.base)):
            raise ValueError(f"slot {slot} out of range for base of length {len(self.base)}")
        self.slot = slot
        self.initial = float(initial)
        self.angular_step = float(angular_step)
        self._memo = [self.initial]

    def _value(self, k: int) -> float:
        while len(self._memo) <= k:
            t = len(self._memo)
            self._memo.append(self._memo[-1] + math.cos(t * self.angular_step))
        return self._memo[k]

    def at(self, k: int) -> np.ndarray:
        if k < 0:
            raise ValueError(f"round index must be nonnegative, got {k}")
        out = self.base.copy()
        out[self.slot] = self._value(k)
        return out


class TableRegressor:
    """Cycles through an explicit table of vectors."""

    kind = "custom-table"

    def __init__(self, rows):
        self.rows = [np.asarray(r, dtype=float) for r in rows]
        if not self.rows:
            raise ValueError("table must contain at least one row")
        if any(r.shape != self.rows[0].shape for r in self.rows):
            raise ValueError("all table rows must have equal length")

    def at(self, k: int) -> np.ndarray:
        return self.rows[k % len(self.rows)].copy()


def regressor_at(source, k: int) -> np.ndarray:
    """Vector emitted by a regressor source at round k (deterministic)."""
    if k < 0:
        raise ValueError(f"round index must be nonnegative, got {k}")
    return source.at(k)
