"""
Exact lattice evolution |Psi(t)> = [S (C x 1)]^t |Psi(0)> and the observables
read off the evolved state: position moments, the reduced coin state and the
spin-position entanglement entropy.

The kernel works on dense arrays pre-allocated to the final light-cone width,
so a run of T steps touches O(T^2) amplitudes and allocates once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from .core import CoinParams, WalkState

__all__ = [
    "ReducedCoinState",
    "PositionStats",
    "TimeSeries",
    "propagate",
    "step",
    "evolve",
    "position_stats",
    "reduced_coin_state",
    "entanglement_entropy",
    "binary_entropy",
    "entropy_from_delta",
    "time_series",
]

# Observer signature used by ``propagate``: (t, up_window, down_window, offset).
Callback = Callable[[int, NDArray[np.complex128], NDArray[np.complex128], int], None]


@dataclass(frozen=True)
class ReducedCoinState:
    """rho_C = [[A, gamma], [conj(gamma), B]] with B = 1 - A."""

    A: float
    gamma: complex

    @property
    def B(self) -> float:
        return 1.0 - self.A

    def matrix(self) -> NDArray[np.complex128]:
        return np.array([[self.A, self.gamma], [np.conj(self.gamma), self.B]])

    @property
    def delta(self) -> float:
        """1 - 4 det(rho_C); the squared length of the Bloch vector."""
        return 1.0 - 4.0 * (self.A * (1.0 - self.A) - abs(self.gamma) ** 2)


@dataclass(frozen=True)
class PositionStats:
    mean: float
    second_moment: float
    time: int

    @property
    def variance(self) -> float:
        return self.second_moment - self.mean**2


@dataclass
class TimeSeries:
    t: NDArray[np.int64]
    mean: NDArray[np.float64]
    variance: NDArray[np.float64]
    A: NDArray[np.float64]
    gamma: NDArray[np.complex128]
    entropy: NDArray[np.float64]


def propagate(
    up: NDArray[np.complex128],
    down: NDArray[np.complex128],
    coin: CoinParams | NDArray[np.complex128],
    steps: int,
    offset: int = 0,
    callback: Callback | None = None,
) -> tuple[NDArray[np.complex128], NDArray[np.complex128], int]:
    """Apply ``steps`` walk steps to amplitude arrays.

    ``up`` and ``down`` may carry leading batch dimensions; the last axis is the
    lattice. Each step applies the coin on every site, then moves spin up one
    site right and spin down one site left. Returns the grown arrays and the new
    offset of their first site. ``callback`` is invoked after every step with
    views that are only valid for the duration of the call.
    """
    if steps < 0:
        raise ValueError(f"steps must be non-negative, got {steps}")
    c = coin.matrix() if isinstance(coin, CoinParams) else np.asarray(coin)
    c00, c01, c10, c11 = c[0, 0], c[0, 1], c[1, 0], c[1, 1]
    up = np.asarray(up, dtype=np.complex128)
    down = np.asarray(down, dtype=np.complex128)
    n = up.shape[-1]
    width = n + 2 * steps
    U = np.zeros(up.shape[:-1] + (width,), dtype=np.complex128)
    D = np.zeros_like(U)
    lo, hi = steps, steps + n
    U[..., lo:hi] = up
    D[..., lo:hi] = down
    tmp = np.empty(up.shape[:-1] + (width,), dtype=np.complex128)
    for t in range(1, steps + 1):
        u, d = U[..., lo:hi], D[..., lo:hi]
        m = hi - lo
        new_up = np.multiply(c00, u, out=tmp[..., :m])
        new_up += c01 * d
        # down first: it reads u and d before either is overwritten below
        new_down = c10 * u
        new_down += c11 * d
        U[..., lo + 1 : hi + 1] = new_up
        U[..., lo] = 0.0
        D[..., lo - 1 : hi - 1] = new_down
        D[..., hi - 1] = 0.0
        lo -= 1
        hi += 1
        if callback is not None:
            callback(t, U[..., lo:hi], D[..., lo:hi], offset - t)
    return U, D, offset - steps


def step(state: WalkState, coin: CoinParams) -> WalkState:
    up, down, offset = propagate(state.up, state.down, coin, 1, state.offset)
    return WalkState(offset, up, down, state.time + 1)


def evolve(
    state: WalkState,
    coin: CoinParams,
    steps: int,
    observer: Callable[[WalkState], None] | None = None,
) -> WalkState:
    """Evolve ``state`` by ``steps`` steps.

    With an ``observer`` the callable receives the state at every time
    t = state.time, ..., state.time + steps. The arrays it sees are views into
    the working buffers and must be copied if kept.
    """
    if steps < 0:
        raise ValueError(f"steps must be non-negative, got {steps}")
    if steps == 0:
        if observer is not None:
            observer(state)
        return state.copy()
    t0 = state.time
    callback = None
    if observer is not None:
        observer(state)

        def callback(t, u, d, off):
            observer(WalkState(off, u, d, t0 + t))

    up, down, offset = propagate(state.up, state.down, coin, steps, state.offset, callback)
    return WalkState(offset, up, down, t0 + steps)


def position_stats(state: WalkState) -> PositionStats:
    p = state.probabilities()
    j = state.sites.astype(float)
    pj = p * j
    return PositionStats(float(np.sum(pj)), float(np.sum(pj * j)), state.time)


def reduced_coin_state(state: WalkState) -> ReducedCoinState:
    """Trace out position: A = sum |a|^2, gamma = sum a conj(b)."""
    A = float(np.sum(np.abs(state.up) ** 2))
    gamma = complex(np.vdot(state.down, state.up))
    return ReducedCoinState(A, gamma)


def binary_entropy(p):
    """-p log2 p - (1-p) log2(1-p), with 0 log 0 = 0. Accepts arrays."""
    p = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    q = 1.0 - p
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -np.where(p > 0, p * np.log2(p), 0.0) - np.where(q > 0, q * np.log2(q), 0.0)
    h = h + 0.0  # normalize -0.0
    return h if h.ndim else float(h)


def entropy_from_delta(delta):
    """Entropy of a qubit state whose eigenvalues are (1 +- sqrt(delta)) / 2."""
    delta = np.clip(np.asarray(delta, dtype=float), 0.0, 1.0)
    return binary_entropy(0.5 * (1.0 + np.sqrt(delta)))


def entanglement_entropy(rho: ReducedCoinState) -> float:
    """Von Neumann entropy (bits) of the reduced coin state."""
    disc = 0.25 - rho.A * (1.0 - rho.A) + abs(rho.gamma) ** 2
    lam = min(max(0.5 + math.sqrt(max(disc, 0.0)), 0.0), 1.0)
    return float(binary_entropy(lam))


def time_series(state: WalkState, coin: CoinParams, steps: int, stride: int = 1) -> TimeSeries:
    """Position and entanglement observables at t = 0, stride, 2 stride, ... and the final step."""
    if stride < 1:
        raise ValueError("stride must be >= 1")
    rows: list[tuple] = []
    t_end = state.time + steps

    def observe(s: WalkState):
        if (s.time - state.time) % stride and s.time != t_end:
            return
        ps = position_stats(s)
        rho = reduced_coin_state(s)
        rows.append((s.time, ps.mean, ps.variance, rho.A, rho.gamma, entanglement_entropy(rho)))

    evolve(state, coin, steps, observe)
    t, mean, var, A, gamma, ent = zip(*rows)
    return TimeSeries(
        np.array(t), np.array(mean), np.array(var), np.array(A), np.array(gamma), np.array(ent)
    )
