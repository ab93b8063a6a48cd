"""Tabular datasets behind the published figures. Each builder returns a list
of flat row dicts ready for CSV output."""

from __future__ import annotations

import math

import numpy as np

from .core import FOURIER, HADAMARD, fair_coin
from .ensemble import FIGURE_DELTAS, bloch_average, figure3_ensemble, scatter_dataset
from .evolution import entropy_from_delta
from .kspace import avg_variance_rate_gaussian, avg_variance_rate_local, delta_gaussian_grid

FIGURE1_SIGMAS = (1.0, 2.0, 3.0, 10.0)
FIGURE5_DELTAS = FIGURE_DELTAS[:-1] + (0.4995 * math.pi,)


def figure1(source: str = "table", n_delta: int = 65, inset_sigmas=None) -> list[dict]:
    """Bloch-averaged long-time variance rate against delta (local and Gaussian),
    plus the inset: rate against sigma0 at the five reference phases.
    """
    deltas = np.linspace(0.0, math.pi, n_delta)
    rows = []
    local = avg_variance_rate_local()
    for d in deltas:
        rows.append({"series": "local", "sigma0": math.nan, "delta": d, "var_rate": local})
    for s0 in FIGURE1_SIGMAS:
        for d in deltas:
            rate = avg_variance_rate_gaussian(fair_coin(d), s0, source)
            rows.append({"series": "gaussian", "sigma0": s0, "delta": d, "var_rate": rate})
    if inset_sigmas is None:
        inset_sigmas = np.arange(1.0, 10.0 + 1e-9, 0.25)
    for d in FIGURE_DELTAS:
        for s0 in inset_sigmas:
            rate = avg_variance_rate_gaussian(fair_coin(d), float(s0), source)
            rows.append({"series": "inset", "sigma0": float(s0), "delta": d, "var_rate": rate})
    return rows


def figure2(n_delta: int = 65, resolution: float = 0.01) -> list[dict]:
    """Wide-packet averages against delta: variance rate and mean asymptotic entropy."""
    rows = []
    for d in np.linspace(0.0, math.pi, n_delta):
        rate = avg_variance_rate_gaussian(fair_coin(d), math.inf)
        ent = bloch_average(lambda a, b: entropy_from_delta(delta_gaussian_grid(a, b, d)), resolution)
        rows.append({"delta": d, "var_rate": rate, "S_E_bar": ent})
    return rows


def figure3(steps: int = 3000, sigma0: float = 10.0, subsample: int = 1, sample_every: int = 1) -> list[dict]:
    """Ensemble time series for Hadamard and Fourier walks from Gaussian states."""
    rows = []
    for name, coin in (("hadamard", HADAMARD), ("fourier", FOURIER)):
        s = figure3_ensemble(coin, sigma0, steps, subsample, sample_every)
        for i in range(s.t.size):
            rows.append(
                {
                    "coin": name,
                    "t": int(s.t[i]),
                    "var_rate": s.var_rate[i],
                    "var_rate_offset": s.var_rate_offset[i],
                    "entropy": s.entropy[i],
                    "n_qubits": s.n_qubits,
                }
            )
    return rows


def _scatter_rows(kind: str, deltas) -> list[dict]:
    return [
        {"delta": p.delta, "alpha": p.alpha, "beta": p.beta, "var_rate": p.var_rate, "S_E_bar": p.S_E_bar, "u": p.u}
        for p in scatter_dataset(kind, deltas)
    ]


def figure4() -> list[dict]:
    return _scatter_rows("local", FIGURE_DELTAS)


def figure5() -> list[dict]:
    return _scatter_rows("gaussian", FIGURE5_DELTAS)
