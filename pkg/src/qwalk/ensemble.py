"""
Averages and sweeps over initial qubits.

Averages over "all qubits" use the flat product measure d(alpha)/pi d(beta)/2pi
on [0, pi] x [-pi, pi); the sin(alpha) (Haar) weighting is available for
comparison only.

Time-dependent ensembles exploit linearity: a qubit (c_up, c_down) evolves as
c_up |up-basis walk> + c_down |down-basis walk>, so two walks per coin give
every ensemble member's A, gamma and position moments through 2x2 quadratic
forms. ``method="direct"`` evolves each member explicitly instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Literal, Sequence

import numpy as np
from numpy.typing import NDArray

from .core import CoinParams, GaussianProfile, Qubit, fair_coin
from .evolution import entropy_from_delta, propagate
from .kspace import (
    AsymptoticReport,
    asymptotic_entropy,
    asymptotic_report,
    delta_gaussian,
    delta_local,
    limit_velocity_gaussian,
    limit_velocity_local,
    variance_rate_local,
)

__all__ = [
    "QubitGrid",
    "SweepRecord",
    "EnsembleSeries",
    "ScatterPoint",
    "FIGURE_DELTAS",
    "bloch_average",
    "spinors",
    "ensemble_series",
    "final_observables",
    "figure3_ensemble",
    "scatter_dataset",
    "sweep",
]

FIGURE_DELTAS = (0.0, math.pi / 8, math.pi / 4, 3 * math.pi / 8, math.pi / 2)


@dataclass(frozen=True)
class QubitGrid:
    """Product grid of Bloch angles, enumerated alpha-major."""

    alphas: NDArray[np.float64]
    betas: NDArray[np.float64]
    measure: Literal["flat", "haar"] = "flat"

    def __post_init__(self):
        object.__setattr__(self, "alphas", np.asarray(self.alphas, dtype=float))
        object.__setattr__(self, "betas", np.asarray(self.betas, dtype=float))
        if self.measure not in ("flat", "haar"):
            raise ValueError(f"measure must be 'flat' or 'haar', got {self.measure!r}")

    @classmethod
    def stepped(cls, step: float = 0.1, measure="flat") -> "QubitGrid":
        """alpha = 0, step, ... <= pi and beta = 0, step, ... <= 2pi (step 0.1 gives 32 x 63 = 2016)."""
        n_a = int(math.floor(math.pi / step + 1e-9)) + 1
        n_b = int(math.floor(2 * math.pi / step + 1e-9)) + 1
        return cls(step * np.arange(n_a), step * np.arange(n_b), measure)

    @classmethod
    def midpoint(cls, resolution: float = 0.01, measure="flat") -> "QubitGrid":
        """Midpoint nodes in alpha on [0, pi], uniform periodic nodes in beta on [-pi, pi)."""
        n_a = max(1, int(round(math.pi / resolution)))
        n_b = max(1, int(round(2 * math.pi / resolution)))
        alphas = (np.arange(n_a) + 0.5) * (math.pi / n_a)
        betas = -math.pi + np.arange(n_b) * (2 * math.pi / n_b)
        return cls(alphas, betas, measure)

    def __len__(self) -> int:
        return self.alphas.size * self.betas.size

    def mesh(self) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """Flattened (alpha, beta) arrays in alpha-major order."""
        A, B = np.meshgrid(self.alphas, self.betas, indexing="ij")
        return A.ravel(), B.ravel()

    def weights(self) -> NDArray[np.float64]:
        A, _ = self.mesh()
        w = np.ones_like(A) if self.measure == "flat" else np.sin(A)
        return w / w.sum()

    def qubits(self) -> Iterator[Qubit]:
        for a, b in zip(*self.mesh()):
            yield Qubit(a, b)


def spinors(alpha, beta) -> NDArray[np.complex128]:
    """Stack of qubit spinors, shape (n, 2)."""
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    return np.stack([np.cos(alpha / 2) + 0j, np.exp(1j * beta) * np.sin(alpha / 2)], axis=-1)


def bloch_average(
    f: Callable[[NDArray, NDArray], NDArray],
    resolution: float = 0.01,
    measure: Literal["flat", "haar"] = "flat",
) -> float:
    """Average f(alpha, beta) over the Bloch sphere.

    ``f`` is called once with flattened alpha and beta arrays and must return
    values of the same shape (wrap scalar functions with ``np.vectorize``).
    """
    grid = QubitGrid.midpoint(resolution, measure)
    A, B = grid.mesh()
    values = np.broadcast_to(np.asarray(f(A, B), dtype=float), A.shape)
    return float(np.dot(grid.weights(), values))


# --------------------------------------------------------------------------- time-dependent ensembles


@dataclass
class EnsembleSeries:
    """Ensemble means per recorded step.

    ``var_rate`` is <sigma^2>/t^2 of the raw variance; ``var_rate_offset``
    subtracts each member's initial variance first. t = 0 rows carry NaN rates.
    """

    t: NDArray[np.int64]
    var_rate: NDArray[np.float64]
    var_rate_offset: NDArray[np.float64]
    entropy: NDArray[np.float64]
    mean_j: NDArray[np.float64]
    n_qubits: int
    coin: CoinParams = field(default_factory=CoinParams)


def _record_times(steps: int, sample_every: int) -> set[int]:
    times = set(range(0, steps + 1, sample_every))
    times.add(steps)
    return times


def _initial_profile(sigma0: float | None) -> tuple[NDArray[np.float64], int]:
    if sigma0 is None:
        return np.ones(1), 0
    prof = GaussianProfile(sigma0)
    return prof.amplitudes(), -prof.cutoff


class _Accumulator:
    def __init__(self):
        self.rows: list[tuple] = []
        self.var0: NDArray[np.float64] | None = None

    def add(self, t: int, A, gamma, mean, second):
        var = second - mean * mean
        if self.var0 is None:
            self.var0 = var.copy()
        delta = 1.0 - 4.0 * (A * (1.0 - A) - np.abs(gamma) ** 2)
        ent = entropy_from_delta(delta)
        if t == 0:
            rate = rate_off = math.nan
        else:
            rate = float(np.mean(var)) / t**2
            rate_off = float(np.mean(var - self.var0)) / t**2
        self.rows.append((t, rate, rate_off, float(np.mean(ent)), float(np.mean(mean))))


def _superposition_run(C, coin, f, offset, steps, times, emit):
    # basis walks: row 0 starts spin up, row 1 spin down
    up0 = np.zeros((2, f.size), dtype=np.complex128)
    dn0 = np.zeros_like(up0)
    up0[0] = f
    dn0[1] = f
    Cc = C.conj()

    def observe(t, U, D, off):
        if t not in times:
            return
        j = np.arange(off, off + U.shape[-1], dtype=float)
        P = U.conj() @ U.T
        G = U @ D.conj().T
        Uj, Dj = U * j, D * j
        J1 = U.conj() @ Uj.T + D.conj() @ Dj.T
        J2 = Uj.conj() @ Uj.T + Dj.conj() @ Dj.T
        A = np.einsum("qm,mn,qn->q", Cc, P, C).real
        gamma = np.einsum("qm,mn,qn->q", C, G, Cc)
        mean = np.einsum("qm,mn,qn->q", Cc, J1, C).real
        second = np.einsum("qm,mn,qn->q", Cc, J2, C).real
        emit(t, A, gamma, mean, second)

    observe(0, up0, dn0, offset)
    propagate(up0, dn0, coin, steps, offset, observe)


def _direct_run(C, coin, f, offset, steps, times, emit):
    up0 = C[:, 0:1] * f
    dn0 = C[:, 1:2] * f

    def observe(t, U, D, off):
        if t not in times:
            return
        j = np.arange(off, off + U.shape[-1], dtype=float)
        pu, pd = np.abs(U) ** 2, np.abs(D) ** 2
        p = pu + pd
        A = pu.sum(axis=-1)
        gamma = np.sum(U * D.conj(), axis=-1)
        mean = p @ j
        second = p @ (j * j)
        emit(t, A, gamma, mean, second)

    observe(0, up0, dn0, offset)
    propagate(up0, dn0, coin, steps, offset, observe)


def ensemble_series(
    alphas,
    betas,
    coin: CoinParams,
    steps: int,
    sigma0: float | None = None,
    sample_every: int = 1,
    method: Literal["superposition", "direct"] = "superposition",
) -> EnsembleSeries:
    """Flat ensemble means of variance rate and entanglement over explicit qubits.

    ``sigma0=None`` starts every member from a local state, otherwise from the
    truncated Gaussian envelope.
    """
    C = spinors(alphas, betas).reshape(-1, 2)
    f, offset = _initial_profile(sigma0)
    times = _record_times(steps, sample_every)
    acc = _Accumulator()
    if method == "superposition":
        _superposition_run(C, coin, f, offset, steps, times, acc.add)
    elif method == "direct":
        _direct_run(C, coin, f, offset, steps, times, acc.add)
    else:
        raise ValueError(f"method must be 'superposition' or 'direct', got {method!r}")
    t, rate, rate_off, ent, mean = (np.array(c) for c in zip(*acc.rows))
    return EnsembleSeries(t.astype(np.int64), rate, rate_off, ent, mean, len(C), coin)


def figure3_ensemble(
    coin: CoinParams,
    sigma0: float = 10.0,
    steps: int = 3000,
    subsample: int = 1,
    sample_every: int = 1,
    method: Literal["superposition", "direct"] = "superposition",
) -> EnsembleSeries:
    """Ensemble over the 2016-point stepped grid (every ``subsample``-th point in
    alpha-major order; ``subsample=9`` leaves 224 qubits).
    """
    if subsample < 1:
        raise ValueError("subsample must be >= 1")
    A, B = QubitGrid.stepped(0.1).mesh()
    return ensemble_series(A[::subsample], B[::subsample], coin, steps, sigma0, sample_every, method)


# --------------------------------------------------------------------------- scatter and sweeps


@dataclass(frozen=True)
class ScatterPoint:
    delta: float
    alpha: float
    beta: float
    var_rate: float
    S_E_bar: float
    u: float


def scatter_dataset(
    kind: Literal["local", "gaussian"],
    deltas: Sequence[float] = FIGURE_DELTAS,
    beta: float = 0.0,
    eta: float = 0.0,
    alpha_resolution: float = math.pi / 100,
) -> list[ScatterPoint]:
    """Long-time variance rate against asymptotic entanglement for an alpha sweep.

    Gaussian points use the wide-packet (sigma0 >> 1) closed forms.
    """
    n = int(round(math.pi / alpha_resolution))
    alphas = np.linspace(0.0, math.pi, n + 1)
    out = []
    for d in deltas:
        coin = fair_coin(d, eta)
        cd2 = math.cos(d) ** 2
        for a in alphas:
            q = Qubit(a, beta)
            if kind == "local":
                u = limit_velocity_local(q, coin)
                rate = variance_rate_local(q, coin)
                S = asymptotic_entropy(delta_local(q, coin))
            elif kind == "gaussian":
                u = limit_velocity_gaussian(q, coin)
                rate = cd2 / (1.0 + cd2) - u * u
                S = asymptotic_entropy(delta_gaussian(q, coin))
            else:
                raise ValueError(f"kind must be 'local' or 'gaussian', got {kind!r}")
            out.append(ScatterPoint(d, float(a), q.beta, rate, S, u))
    return out


@dataclass(frozen=True)
class SweepRecord:
    alpha: float
    beta: float
    coin: CoinParams
    report: AsymptoticReport
    sim_var_rate: float | None = None
    sim_entropy: float | None = None


def sweep(
    grid: QubitGrid,
    coins: Iterable[CoinParams],
    kind: Literal["local", "gaussian"] = "local",
    sigma0: float | None = None,
    method: Literal["closed", "quadrature"] = "closed",
    steps: int | None = None,
    nodes: int = 4096,
) -> list[SweepRecord]:
    """One record per (coin, qubit), qubits in alpha-major grid order.

    With ``steps`` the final-time simulated variance rate and entropy are
    attached (computed through the spin-basis superposition).
    """
    A, B = grid.mesh()
    records = []
    for coin in coins:
        sim = None
        if steps:
            sim = final_observables(A, B, coin, steps, sigma0 if kind == "gaussian" else None)
        for i, (a, b) in enumerate(zip(A, B)):
            q = Qubit(a, b)
            rep = asymptotic_report(q, coin, kind, sigma0, method, nodes)
            extra = {} if sim is None else {"sim_var_rate": sim[0][i], "sim_entropy": sim[1][i]}
            records.append(SweepRecord(float(a), q.beta, coin, rep, **extra))
    return records


def final_observables(
    alphas,
    betas,
    coin: CoinParams,
    steps: int,
    sigma0: float | None = None,
    method: Literal["superposition", "direct"] = "superposition",
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Per-qubit variance rate sigma^2/t^2 and entanglement entropy at t = ``steps``.

    ``alphas`` and ``betas`` are paired elementwise. ``sigma0=None`` starts from
    local states.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    C = spinors(alphas, betas).reshape(-1, 2)
    f, offset = _initial_profile(sigma0)
    out: list[NDArray] = []

    def keep(t, A, gamma, mean, second):
        if t == steps:
            out.append((second - mean * mean) / t**2)
            out.append(entropy_from_delta(1.0 - 4.0 * (A * (1.0 - A) - np.abs(gamma) ** 2)))

    if method == "superposition":
        _superposition_run(C, coin, f, offset, steps, {steps}, keep)
    elif method == "direct":
        _direct_run(C, coin, f, offset, steps, {steps}, keep)
    else:
        raise ValueError(f"method must be 'superposition' or 'direct', got {method!r}")
    return out[0], out[1]
