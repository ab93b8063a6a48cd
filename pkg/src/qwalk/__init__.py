"""Discrete-time quantum walks: exact lattice evolution and long-time asymptotics
of spreading and spin-position entanglement."""

from .core import (
    FOURIER,
    HADAMARD,
    CoinParams,
    GaussianProfile,
    Qubit,
    WalkState,
    build_gaussian_state,
    build_local_state,
    fair_coin,
    make_coin,
    make_qubit,
)
from .errors import DomainError, SingularConfigurationError, UnsupportedConfigurationError
from .evolution import (
    PositionStats,
    ReducedCoinState,
    entanglement_entropy,
    evolve,
    position_stats,
    reduced_coin_state,
    step,
    time_series,
)

__version__ = "0.1.0"
