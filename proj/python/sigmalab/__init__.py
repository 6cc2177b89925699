"""Numerical tools for the partial sigma_2 equation u_tt * Lap_x u - |grad_x u_t|^2 = 1."""

from ._core import (
    Candidate,
    SigmalabError,
    __version__,
    barrier_trial,
    classify,
    legendre,
    ma_residual,
    metric,
    random_barrier_suite,
    residual_sweep,
    ricci,
    riemann,
    riemann_norm,
    rigidity_sweep,
    run_cli,
    sigma2_linearization,
    sigma2_tilde,
    solve,
)

__all__ = [
    "Candidate",
    "SigmalabError",
    "__version__",
    "barrier_trial",
    "classify",
    "legendre",
    "ma_residual",
    "metric",
    "random_barrier_suite",
    "residual_sweep",
    "ricci",
    "riemann",
    "riemann_norm",
    "rigidity_sweep",
    "run_cli",
    "sigma2_linearization",
    "sigma2_tilde",
    "solve",
]
