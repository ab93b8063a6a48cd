"""
Momentum-space asymptotics of fair-coin walks.

Amplitudes are transformed as a~_k = sum_j a(j) e^{ikj}, under which one walk
step acts on each momentum component as

    U_k = diag(e^{ik}, e^{-ik}) C(1/2, theta, phi).

Everything here is restricted to fair coins. Long-time quantities come from
the stationary (non-oscillating) part of the spectral decomposition of U_k and
are evaluated either in closed form or by periodic trapezoid quadrature over
k in [-pi, pi) with weight dk / 2 pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np
from numpy.typing import NDArray

from .core import CoinParams, Qubit
from .errors import DomainError, SingularConfigurationError
from .evolution import entropy_from_delta

__all__ = [
    "DEFAULT_NODES",
    "XI_TABLE",
    "KEigenSystem",
    "AsymptoticReport",
    "k_nodes",
    "k_unitary",
    "eigensystem",
    "expansion_coefficients",
    "quadrature",
    "integral_I",
    "integral_R",
    "gaussian_ftilde",
    "xi",
    "fit_xi",
    "I_gaussian",
    "R_gaussian",
    "variance_rate",
    "variance_rate_local",
    "avg_variance_rate_local",
    "avg_variance_rate_gaussian",
    "asymptotic_A_gamma",
    "gamma_local",
    "delta_local",
    "delta_gaussian",
    "asymptotic_entropy",
    "limit_velocity",
    "limit_velocity_local",
    "limit_velocity_gaussian",
    "delta_from_velocity_local",
    "delta_from_velocity_gaussian",
    "asymptotic_report",
    "variance_rate_local_grid",
    "delta_local_grid",
    "delta_gaussian_grid",
    "limit_velocity_gaussian_grid",
]

SQRT2 = math.sqrt(2.0)
I_LOCAL = 1.0 - SQRT2 / 2.0
DEFAULT_NODES = 4096
_CLAMP_TOL = 1e-9
_SINGULAR_GUARD = 1e-6

# (mu, nu) per xi_n, xi_n(sigma0) = mu / sigma0^2 + nu / sigma0^3.
XI_TABLE: dict[int, tuple[float, float]] = {
    1: (0.8674, -0.6461),
    2: (-1.2113, 0.7183),
    3: (0.2477, -0.1083),
    4: (-0.6081, 0.4476),
    5: (2.3145, -1.4515),
}

FTilde = Callable[[NDArray[np.float64]], NDArray]


def _bracket(qubit: Qubit, coin: CoinParams) -> tuple[float, float]:
    """(cos a + sin a cos(b+d+e), sin a sin(b+d+e)), the qubit/coin combination in <j>_t."""
    ph = qubit.beta + coin.delta + coin.eta
    sa = math.sin(qubit.alpha)
    return math.cos(qubit.alpha) + sa * math.cos(ph), sa * math.sin(ph)


# --------------------------------------------------------------------------- eigenproblem


@dataclass(frozen=True)
class KEigenSystem:
    """Eigenpairs of U_k. Arrays broadcast over the shape of ``k``; spinors carry a leading axis of 2."""

    k: NDArray[np.float64]
    lambda_plus: NDArray[np.complex128]
    lambda_minus: NDArray[np.complex128]
    phi_plus: NDArray[np.complex128]
    phi_minus: NDArray[np.complex128]
    omega: NDArray[np.float64]

    def z_expectation(self, sign: int = 1) -> NDArray[np.float64]:
        v = self.phi_plus if sign > 0 else self.phi_minus
        return np.abs(v[0]) ** 2 - np.abs(v[1]) ** 2


def k_nodes(nodes: int = DEFAULT_NODES) -> NDArray[np.float64]:
    """Uniform periodic trapezoid nodes on [-pi, pi)."""
    if nodes < 2:
        raise ValueError("need at least two quadrature nodes")
    return -math.pi + (2.0 * math.pi / nodes) * np.arange(nodes)


def k_unitary(k, coin: CoinParams) -> NDArray[np.complex128]:
    """U_k as an array of shape (2, 2) + shape(k)."""
    k = np.asarray(k, dtype=float)
    C = coin.matrix()
    ep, em = np.exp(1j * k), np.exp(-1j * k)
    return np.array([[ep * C[0, 0], ep * C[0, 1]], [em * C[1, 0], em * C[1, 1]]])


def eigensystem(k, coin: CoinParams) -> KEigenSystem:
    """Eigenvalues +-e^{i(delta +- omega)}, sin(omega) = sin(k - delta)/sqrt(2).

    Eigenvectors are (e^{ik}, e^{-i(delta+eta)} (sqrt2 lambda - e^{ik})), scaled
    by their norm N^2 = 2 s (s -+ cos(k - delta)), s = sqrt(1 + cos^2(k - delta)),
    and then renormalized numerically.

    Raises
    ------
    UnsupportedConfigurationError
        For a biased coin.
    """
    coin.require_fair()
    k = np.asarray(k, dtype=float)
    d, e = coin.delta, coin.eta
    kd = k - d
    omega = np.arcsin(np.sin(kd) / SQRT2)
    ck = np.cos(kd)
    s = np.sqrt(1.0 + ck * ck)
    eik = np.exp(1j * k)
    phase = np.exp(-1j * (d + e))
    out = {}
    for sign, label in ((1, "plus"), (-1, "minus")):
        lam = sign * np.exp(1j * (d + sign * omega))
        v = np.array([eik, phase * (SQRT2 * lam - eik)])
        v = v / np.sqrt(2.0 * s * (s - sign * ck))
        v = v / np.sqrt(np.abs(v[0]) ** 2 + np.abs(v[1]) ** 2)
        out[f"lambda_{label}"] = lam
        out[f"phi_{label}"] = v
    return KEigenSystem(k=k, omega=omega, **out)


def expansion_coefficients(
    k, coin: CoinParams, qubit: Qubit, ftilde_value=1.0, eig: KEigenSystem | None = None
) -> tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    """c_k^{+-} = <Phi_k^{+-} | Phi_k(0)> via the closed expression

        c = e^{-ik} / N * { a~ - b~ e^{i(delta+eta)} [1 - sqrt2 e^{ik} / lambda] }

    with a~ = f~ cos(alpha/2), b~ = f~ e^{i beta} sin(alpha/2).
    """
    if eig is None:
        eig = eigensystem(k, coin)
    k = eig.k
    f = np.asarray(ftilde_value)
    a0 = f * qubit.spinor[0]
    b0 = f * qubit.spinor[1]
    s = np.sqrt(1.0 + np.cos(k - coin.delta) ** 2)
    ck = np.cos(k - coin.delta)
    eikn = np.exp(-1j * k)
    ph = np.exp(1j * (coin.delta + coin.eta))
    res = []
    for sign, lam in ((1, eig.lambda_plus), (-1, eig.lambda_minus)):
        N = np.sqrt(2.0 * s * (s - sign * ck))
        res.append(eikn / N * (a0 - b0 * ph * (1.0 - SQRT2 * np.exp(1j * k) / lam)))
    return res[0], res[1]


# --------------------------------------------------------------------------- quadrature


def quadrature(values: NDArray):
    """Periodic trapezoid rule on ``k_nodes``: integral of g over [-pi, pi) with weight dk / 2 pi."""
    return np.mean(values, axis=-1)


def _ftilde_sq(ftilde: FTilde | None, k: NDArray[np.float64], check: bool = True):
    if ftilde is None:
        return np.ones_like(k)
    w = np.abs(np.asarray(ftilde(k))) ** 2
    if check:
        norm = float(np.mean(w))
        if abs(norm - 1.0) > 1e-6:
            raise DomainError(f"f~ must satisfy integral |f~|^2 dk/2pi = 1, got {norm:.9g}")
    return w


def integral_I(ftilde: FTilde | None = None, delta: float = 0.0, nodes: int = DEFAULT_NODES) -> float:
    """I = integral |f~|^2 cos^2(k-delta) / (1 + cos^2(k-delta)) dk/2pi. ``None`` means f~ = 1."""
    k = k_nodes(nodes)
    c = np.cos(k - delta)
    return float(np.mean(_ftilde_sq(ftilde, k) * c * c / (1.0 + c * c)))


def integral_R(ftilde: FTilde | None = None, delta: float = 0.0, nodes: int = DEFAULT_NODES) -> float:
    """R = integral |f~|^2 cos(k-delta) sin(k-delta) / (1 + cos^2(k-delta)) dk/2pi."""
    k = k_nodes(nodes)
    c, s = np.cos(k - delta), np.sin(k - delta)
    return float(np.mean(_ftilde_sq(ftilde, k) * c * s / (1.0 + c * c)))


def gaussian_ftilde(k, sigma0: float):
    """Continuum transform of the Gaussian envelope, (8 pi sigma0^2)^{1/4} exp(-k^2 sigma0^2)."""
    if not sigma0 >= 1.0:
        raise DomainError(f"sigma0 must be >= 1, got {sigma0!r}")
    k = np.asarray(k, dtype=float)
    return (8.0 * math.pi * sigma0**2) ** 0.25 * np.exp(-(k * k) * sigma0**2)


def _gaussian(sigma0: float) -> FTilde:
    return lambda k: gaussian_ftilde(k, sigma0)


# --------------------------------------------------------------------------- finite-width fits


def xi(n: int, sigma0: float) -> float:
    """Tabulated correction xi_n(sigma0) = mu_n / sigma0^2 + nu_n / sigma0^3."""
    if n not in XI_TABLE:
        raise DomainError(f"xi index must be in 1..5, got {n!r}")
    if not sigma0 >= 1.0:
        raise DomainError(f"sigma0 must be >= 1, got {sigma0!r}")
    if math.isinf(sigma0):
        return 0.0
    mu, nu = XI_TABLE[n]
    return mu / sigma0**2 + nu / sigma0**3


def fit_xi(sigma0: float, n_delta: int = 64, nodes: int = DEFAULT_NODES) -> dict[int, float]:
    """Effective xi_1..xi_5 at one width, by least squares of the fitted I_G / R_G
    forms against quadrature over delta in (0, pi/2).
    """
    deltas = np.linspace(0.0, math.pi / 2, n_delta + 2)[1:-1]
    f = _gaussian(sigma0)
    I = np.array([integral_I(f, d, nodes) for d in deltas])
    R = np.array([integral_R(f, d, nodes) for d in deltas])
    c, s = np.cos(deltas), np.sin(deltas)
    c2 = c * c
    MI = np.stack([c2 * c2, c2, np.ones_like(c2)], axis=1)
    xI = np.linalg.lstsq(MI, (1.0 + c2) * I - c2, rcond=None)[0]
    g = c * s / (1.0 + c2)
    MR = np.stack([np.sin(2 * deltas), g], axis=1)
    xR = np.linalg.lstsq(MR, R + g, rcond=None)[0]
    return {1: xI[0], 2: xI[1], 3: xI[2], 4: xR[0], 5: xR[1]}


def I_gaussian(delta: float, sigma0: float) -> float:
    """Fitted I_G(delta, sigma0); sigma0 = inf gives the wide-packet limit."""
    c2 = math.cos(delta) ** 2
    x1, x2, x3 = (xi(n, sigma0) for n in (1, 2, 3))
    return (c2 * c2 * x1 + c2 * (1.0 + x2) + x3) / (1.0 + c2)


def R_gaussian(delta: float, sigma0: float) -> float:
    """Fitted R_G(delta, sigma0).

    The tabulated xi_4 row multiplies sin(2 delta) and the xi_5 row the
    cos(delta) sin(delta) / (1 + cos^2 delta) term; with the opposite pairing
    the fit misses quadrature by up to 0.7.
    """
    c, s = math.cos(delta), math.sin(delta)
    return c * s / (1.0 + c * c) * (xi(5, sigma0) - 1.0) + math.sin(2 * delta) * xi(4, sigma0)


def _gaussian_IR(delta: float, sigma0: float, source: str, nodes: int) -> tuple[float, float]:
    if not sigma0 >= 1.0:
        raise DomainError(f"sigma0 must be >= 1, got {sigma0!r}")
    if math.isinf(sigma0):
        c, s = math.cos(delta), math.sin(delta)
        return c * c / (1.0 + c * c), -c * s / (1.0 + c * c)
    if source == "table":
        return I_gaussian(delta, sigma0), R_gaussian(delta, sigma0)
    if source == "quadrature":
        f = _gaussian(sigma0)
        return integral_I(f, delta, nodes), integral_R(f, delta, nodes)
    raise ValueError(f"unknown source {source!r}; expected 'table' or 'quadrature'")


# --------------------------------------------------------------------------- variance and velocity


def limit_velocity(qubit: Qubit, coin: CoinParams, I: float, R: float) -> float:
    """u = <j>_t / t = I [cos a + sin a cos(b+d+e)] - R sin a sin(b+d+e)."""
    X, Y = _bracket(qubit, coin)
    return I * X - R * Y


def variance_rate(qubit: Qubit, coin: CoinParams, I: float, R: float) -> float:
    """sigma^2 / t^2 = I - u^2 for given moment integrals."""
    return I - limit_velocity(qubit, coin, I, R) ** 2


def variance_rate_local(qubit: Qubit, coin: CoinParams) -> float:
    coin.require_fair()
    X, _ = _bracket(qubit, coin)
    return I_LOCAL - (1.5 - SQRT2) * X * X


def avg_variance_rate_local() -> float:
    """Bloch average of the local rate, (2 sqrt2 - 1) / 8 for every fair coin."""
    return (2.0 * SQRT2 - 1.0) / 8.0


def avg_variance_rate_gaussian(
    coin: CoinParams,
    sigma0: float,
    source: Literal["quadrature", "table"] = "quadrature",
    nodes: int = DEFAULT_NODES,
) -> float:
    """Bloch-averaged rate I_G - (3 I_G^2 + R_G^2) / 4. ``sigma0=inf`` gives the wide limit."""
    coin.require_fair()
    I, R = _gaussian_IR(coin.delta, sigma0, source, nodes)
    return I - (3.0 * I * I + R * R) / 4.0


def limit_velocity_local(qubit: Qubit, coin: CoinParams) -> float:
    coin.require_fair()
    X, _ = _bracket(qubit, coin)
    return I_LOCAL * X


def limit_velocity_gaussian(qubit: Qubit, coin: CoinParams) -> float:
    """Wide-packet velocity [cos a cos^2 d + sin a cos d cos(b+e)] / (1 + cos^2 d)."""
    coin.require_fair()
    cd = math.cos(coin.delta)
    a = qubit.alpha
    return (math.cos(a) * cd * cd + math.sin(a) * cd * math.cos(qubit.beta + coin.eta)) / (1.0 + cd * cd)


# --------------------------------------------------------------------------- stationary coin state


def asymptotic_A_gamma(
    qubit: Qubit, coin: CoinParams, ftilde: FTilde | None = None, nodes: int = DEFAULT_NODES
) -> tuple[float, complex]:
    """Stationary A and gamma by quadrature of

        A = sum_{+-} integral |c^{+-}|^2 |Phi_up|^2 dk/2pi,
        gamma = sum_{+-} integral |c^{+-}|^2 Phi_up conj(Phi_down) dk/2pi.

    ``ftilde=None`` is the local state (f~ = 1).
    """
    coin.require_fair()
    k = k_nodes(nodes)
    w = _ftilde_sq(ftilde, k)
    eig = eigensystem(k, coin)
    psi = qubit.spinor
    A = 0.0
    gamma = 0.0j
    for v in (eig.phi_plus, eig.phi_minus):
        c2 = np.abs(np.conj(v[0]) * psi[0] + np.conj(v[1]) * psi[1]) ** 2 * w
        A += float(np.mean(c2 * np.abs(v[0]) ** 2))
        gamma += complex(np.mean(c2 * v[0] * np.conj(v[1])))
    return A, gamma


def _A_gamma_wide(qubit: Qubit, coin: CoinParams) -> tuple[float, complex]:
    # sigma0 -> inf: |f~|^2 dk/2pi tends to a unit point mass at k = 0
    eig = eigensystem(np.array([0.0]), coin)
    psi = qubit.spinor
    A, gamma = 0.0, 0.0j
    for v in (eig.phi_plus[:, 0], eig.phi_minus[:, 0]):
        c2 = abs(np.vdot(v, psi)) ** 2
        A += c2 * abs(v[0]) ** 2
        gamma += c2 * v[0] * np.conj(v[1])
    return float(A), complex(gamma)


def gamma_local(qubit: Qubit, coin: CoinParams) -> complex:
    """Closed-form stationary coherence for a local initial state."""
    coin.require_fair()
    th = coin.delta + coin.eta
    a, b = qubit.alpha, qubit.beta
    return (I_LOCAL / 2.0) * np.exp(1j * th) * math.cos(a) + 0.5 * math.sin(a) * (
        (SQRT2 / 4.0) * np.exp(-1j * b) - (3.0 * SQRT2 / 4.0 - 1.0) * np.exp(1j * (b + 2.0 * th))
    )


def _clamp_unit(x: float, name: str) -> float:
    if x < -_CLAMP_TOL or x > 1.0 + _CLAMP_TOL or math.isnan(x):
        raise DomainError(f"{name} = {x!r} lies outside [0, 1]")
    return min(max(x, 0.0), 1.0)


def delta_local(qubit: Qubit, coin: CoinParams) -> float:
    coin.require_fair()
    d = (3.0 - 2.0 * SQRT2) * (
        1.0 + math.sin(2.0 * qubit.alpha) * math.cos(qubit.beta + coin.delta + coin.eta)
    )
    return _clamp_unit(d, "Delta_L")


def delta_gaussian(qubit: Qubit, coin: CoinParams) -> float:
    """Wide-packet Delta_G = [cos a cos d + sin a cos(b+e)]^2 / (1 + cos^2 d)."""
    coin.require_fair()
    cd = math.cos(coin.delta)
    num = math.cos(qubit.alpha) * cd + math.sin(qubit.alpha) * math.cos(qubit.beta + coin.eta)
    return _clamp_unit(num * num / (1.0 + cd * cd), "Delta_G")


def asymptotic_entropy(Delta: float) -> float:
    """Entropy (bits) for eigenvalues (1 +- sqrt(Delta)) / 2."""
    return float(entropy_from_delta(_clamp_unit(float(Delta), "Delta")))


def delta_from_velocity_local(alpha: float, u_L: float) -> float:
    """Delta_L = (4 - 2 sqrt2) u_L cos(alpha) - (3 - 2 sqrt2) cos(2 alpha).

    Raises
    ------
    DomainError
        If no azimuth reproduces ``u_L`` at this ``alpha``, i.e.
        |u_L / (1 - sqrt2/2) - cos(alpha)| > sin(alpha).
    """
    if abs(u_L / I_LOCAL - math.cos(alpha)) > math.sin(alpha) + 1e-9:
        raise DomainError(f"u_L = {u_L!r} is not reachable from polar angle {alpha!r}")
    d = (4.0 - 2.0 * SQRT2) * u_L * math.cos(alpha) - (3.0 - 2.0 * SQRT2) * math.cos(2.0 * alpha)
    return _clamp_unit(d, "Delta_L(alpha, u_L)")


def delta_from_velocity_gaussian(delta_phase: float, u_G: float) -> float:
    """Delta_G = u_G^2 (1 + cos^2 d) / cos^2 d.

    Raises
    ------
    SingularConfigurationError
        When ``delta_phase`` is within 1e-6 of pi/2 (mod pi); use ``delta_gaussian`` there.
    """
    cd = math.cos(delta_phase)
    if abs(cd) <= _SINGULAR_GUARD:
        raise SingularConfigurationError(
            "velocity does not determine Delta_G at delta = pi/2; evaluate delta_gaussian instead"
        )
    return _clamp_unit(u_G * u_G * (1.0 + cd * cd) / (cd * cd), "Delta_G(delta, u_G)")


# --------------------------------------------------------------------------- array forms
# Same closed forms over arrays of Bloch angles, for grid averages and sweeps.


def variance_rate_local_grid(alpha, beta, delta: float, eta: float = 0.0):
    X = np.cos(alpha) + np.sin(alpha) * np.cos(beta + delta + eta)
    return I_LOCAL - (1.5 - SQRT2) * X * X


def delta_local_grid(alpha, beta, delta: float, eta: float = 0.0):
    d = (3.0 - 2.0 * SQRT2) * (1.0 + np.sin(2.0 * alpha) * np.cos(beta + delta + eta))
    return np.clip(d, 0.0, 1.0)


def delta_gaussian_grid(alpha, beta, delta: float, eta: float = 0.0):
    cd = math.cos(delta)
    num = np.cos(alpha) * cd + np.sin(alpha) * np.cos(beta + eta)
    return np.clip(num * num / (1.0 + cd * cd), 0.0, 1.0)


def limit_velocity_gaussian_grid(alpha, beta, delta: float, eta: float = 0.0):
    cd = math.cos(delta)
    return (np.cos(alpha) * cd * cd + np.sin(alpha) * cd * np.cos(beta + eta)) / (1.0 + cd * cd)


# --------------------------------------------------------------------------- report


@dataclass(frozen=True)
class AsymptoticReport:
    I: float
    R: float
    A_bar: float
    gamma_bar: complex
    Delta: float
    S_E_bar: float
    u: float
    var_rate: float
    regime: str = "local"

    def identity_residual(self) -> float:
        """|Delta - (2A - 1)^2 - 4|gamma|^2|."""
        return abs(self.Delta - (2.0 * self.A_bar - 1.0) ** 2 - 4.0 * abs(self.gamma_bar) ** 2)


def asymptotic_report(
    qubit: Qubit,
    coin: CoinParams,
    kind: Literal["local", "gaussian"] = "local",
    sigma0: float | None = None,
    method: Literal["closed", "quadrature"] = "closed",
    nodes: int = DEFAULT_NODES,
) -> AsymptoticReport:
    """Long-time report for one (qubit, coin).

    ``method="closed"`` uses the closed forms; for Gaussian states these are the
    wide-packet (sigma0 >> 1) limits regardless of ``sigma0`` and the report is
    labelled ``gaussian-asymptotic``. ``method="quadrature"`` integrates the
    stationary coin state for the actual f~ (finite sigma0).
    """
    coin.require_fair()
    if kind not in ("local", "gaussian"):
        raise ValueError(f"kind must be 'local' or 'gaussian', got {kind!r}")
    if method not in ("closed", "quadrature"):
        raise ValueError(f"method must be 'closed' or 'quadrature', got {method!r}")
    if kind == "gaussian":
        if sigma0 is None:
            raise DomainError("a Gaussian report needs sigma0")
        if not sigma0 >= 1.0:
            raise DomainError(f"sigma0 must be >= 1, got {sigma0!r}")

    if method == "closed":
        if kind == "local":
            I, R = I_LOCAL, 0.0
            u = limit_velocity_local(qubit, coin)
            Delta = delta_local(qubit, coin)
            gamma = gamma_local(qubit, coin)
            regime = "local"
        else:
            I, R = _gaussian_IR(coin.delta, math.inf, "table", nodes)
            u = limit_velocity_gaussian(qubit, coin)
            Delta = delta_gaussian(qubit, coin)
            gamma = _A_gamma_wide(qubit, coin)[1]
            regime = "gaussian-asymptotic"
        A = 0.5 * (1.0 + u)
    else:
        f = None if kind == "local" else _gaussian(sigma0)
        I, R = integral_I(f, coin.delta, nodes), integral_R(f, coin.delta, nodes)
        A, gamma = asymptotic_A_gamma(qubit, coin, f, nodes)
        u = 2.0 * A - 1.0
        Delta = _clamp_unit(1.0 - 4.0 * (A * (1.0 - A) - abs(gamma) ** 2), "Delta")
        regime = "local" if kind == "local" else "gaussian-finite"
    return AsymptoticReport(
        I=I,
        R=R,
        A_bar=A,
        gamma_bar=complex(gamma),
        Delta=Delta,
        S_E_bar=asymptotic_entropy(Delta),
        u=u,
        var_rate=I - u * u,
        regime=regime,
    )
