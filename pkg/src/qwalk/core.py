"""
Domain types and constructors for one-dimensional coined quantum walks.

A walk state is a pair of complex amplitude arrays (spin up, spin down) over a
contiguous window of lattice sites. Coins are the general SU(2) family

    C(q, theta, phi) = [[ sqrt(q),                 sqrt(1-q) e^{i theta}      ],
                        [ sqrt(1-q) e^{i phi},    -sqrt(q) e^{i(theta+phi)}   ]]

with the phase combinations delta = (theta+phi)/2 and eta = (theta-phi)/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .errors import DomainError, UnsupportedConfigurationError

__all__ = [
    "Qubit",
    "CoinParams",
    "WalkState",
    "GaussianProfile",
    "HADAMARD",
    "FOURIER",
    "fair_coin",
    "make_qubit",
    "make_coin",
    "build_local_state",
    "build_gaussian_state",
]

TWO_PI = 2.0 * math.pi
_ANGLE_TOL = 1e-12


@dataclass(frozen=True)
class Qubit:
    """Initial coin state on the Bloch sphere.

    ``alpha`` is the polar angle in [0, pi]; ``beta`` the azimuth, stored in
    [0, 2 pi). Any real ``beta`` is accepted and reduced modulo 2 pi, so the
    [-pi, pi] convention used for averaging maps onto the same states.
    """

    alpha: float
    beta: float = 0.0

    def __post_init__(self):
        alpha = float(self.alpha)
        if not (-_ANGLE_TOL <= alpha <= math.pi + _ANGLE_TOL) or math.isnan(alpha):
            raise DomainError(f"polar angle alpha must lie in [0, pi], got {alpha!r}")
        alpha = min(max(alpha, 0.0), math.pi)
        beta = float(self.beta) % TWO_PI
        if beta >= TWO_PI:  # -tiny % 2pi rounds up to 2pi
            beta = 0.0
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def spinor(self) -> NDArray[np.complex128]:
        """(cos(alpha/2), e^{i beta} sin(alpha/2))."""
        return np.array(
            [math.cos(self.alpha / 2), np.exp(1j * self.beta) * math.sin(self.alpha / 2)],
            dtype=np.complex128,
        )


@dataclass(frozen=True)
class CoinParams:
    q: float = 0.5
    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        q = float(self.q)
        if not (0.0 <= q <= 1.0):
            raise DomainError(f"coin bias q must lie in [0, 1], got {q!r}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "phi", float(self.phi))

    @property
    def delta(self) -> float:
        return 0.5 * (self.theta + self.phi)

    @property
    def eta(self) -> float:
        return 0.5 * (self.theta - self.phi)

    @property
    def fair(self) -> bool:
        return self.q == 0.5

    def require_fair(self) -> "CoinParams":
        if not self.fair:
            raise UnsupportedConfigurationError(
                f"asymptotic results are only available for fair coins (q = 1/2), got q = {self.q}"
            )
        return self

    def matrix(self) -> NDArray[np.complex128]:
        return make_coin(self.q, self.theta, self.phi)


HADAMARD = CoinParams(0.5, 0.0, 0.0)
FOURIER = CoinParams(0.5, math.pi / 2, math.pi / 2)


def fair_coin(delta: float, eta: float = 0.0) -> CoinParams:
    """Fair coin with the given phase combinations (theta = delta+eta, phi = delta-eta)."""
    return CoinParams(0.5, delta + eta, delta - eta)


@dataclass(frozen=True)
class GaussianProfile:
    """Gaussian position envelope f(j) ~ exp(-j^2 / (4 sigma0^2)).

    The window is truncated to |j| <= cutoff; by default cutoff = ceil(6 sigma0),
    which discards less than 1e-8 of the probability.
    """

    sigma0: float
    cutoff: int | None = None

    def __post_init__(self):
        sigma0 = float(self.sigma0)
        if not sigma0 >= 1.0:
            raise DomainError(f"Gaussian width sigma0 must be >= 1, got {sigma0!r}")
        cutoff = math.ceil(6.0 * sigma0) if self.cutoff is None else int(self.cutoff)
        if cutoff < 0:
            raise DomainError(f"cutoff must be non-negative, got {cutoff}")
        object.__setattr__(self, "sigma0", sigma0)
        object.__setattr__(self, "cutoff", cutoff)

    def sites(self) -> NDArray[np.int64]:
        return np.arange(-self.cutoff, self.cutoff + 1)

    def amplitudes(self) -> NDArray[np.float64]:
        """Truncated, renormalized envelope f(j) on ``sites()``."""
        j = self.sites().astype(float)
        f = np.exp(-(j * j) / (4.0 * self.sigma0**2))
        return f / np.sqrt(np.sum(f * f))


@dataclass
class WalkState:
    """Amplitudes a(j, t), b(j, t) on sites offset, offset+1, ..., offset+len-1."""

    offset: int
    up: NDArray[np.complex128]
    down: NDArray[np.complex128]
    time: int = 0
    _sites: NDArray[np.int64] | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.up = np.asarray(self.up, dtype=np.complex128)
        self.down = np.asarray(self.down, dtype=np.complex128)
        if self.up.shape != self.down.shape or self.up.ndim != 1:
            raise ValueError("up and down must be 1-D arrays of equal length")
        if self.time < 0:
            raise ValueError("time must be non-negative")

    def __len__(self) -> int:
        return self.up.shape[0]

    @property
    def sites(self) -> NDArray[np.int64]:
        if self._sites is None or self._sites.shape[0] != len(self):
            self._sites = np.arange(self.offset, self.offset + len(self))
        return self._sites

    def probabilities(self) -> NDArray[np.float64]:
        return np.abs(self.up) ** 2 + np.abs(self.down) ** 2

    def norm(self) -> float:
        return float(np.sum(self.probabilities()))

    def copy(self) -> "WalkState":
        return WalkState(self.offset, self.up.copy(), self.down.copy(), self.time)


def make_qubit(alpha: float, beta: float = 0.0) -> Qubit:
    return Qubit(alpha, beta)


def make_coin(q: float, theta: float, phi: float) -> NDArray[np.complex128]:
    """Return the 2x2 SU(2) coin matrix C(q, theta, phi).

    Raises
    ------
    DomainError
        If q is outside [0, 1].
    """
    if not (0.0 <= q <= 1.0):
        raise DomainError(f"coin bias q must lie in [0, 1], got {q!r}")
    sq, sp = math.sqrt(q), math.sqrt(1.0 - q)
    return np.array(
        [
            [sq, sp * np.exp(1j * theta)],
            [sp * np.exp(1j * phi), -sq * np.exp(1j * (theta + phi))],
        ],
        dtype=np.complex128,
    )


def build_local_state(qubit: Qubit) -> WalkState:
    a, b = qubit.spinor
    return WalkState(0, np.array([a]), np.array([b]), 0)


def build_gaussian_state(qubit: Qubit, profile: GaussianProfile | float) -> WalkState:
    """Qubit times a truncated Gaussian envelope centred on the origin."""
    if not isinstance(profile, GaussianProfile):
        profile = GaussianProfile(profile)
    f = profile.amplitudes()
    a, b = qubit.spinor
    return WalkState(-profile.cutoff, a * f, b * f, 0)
