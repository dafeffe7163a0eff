"""Noisy voter model toolkit.

Thin python surface over the compiled core: graph kernels, the forward
chain, exact stationary sampling, small-instance exact moments, and the
closed-form analytics used by the verification suite.
"""

from ._nvm import (
    Kernel,
    cycle_sigma_sq,
    exact_moments,
    gambler_gf,
    hitting_time,
    kernel,
    ks_to_gaussian,
    meet_before_absorption,
    meeting_time,
    sample_stationary_bits,
    sample_stationary_share,
    sigma_sq_mc,
    simulate_share,
    stein_bracket,
    theta,
)

__all__ = [
    "Kernel",
    "cycle_sigma_sq",
    "exact_moments",
    "gambler_gf",
    "hitting_time",
    "kernel",
    "ks_to_gaussian",
    "meet_before_absorption",
    "meeting_time",
    "sample_stationary_bits",
    "sample_stationary_share",
    "sigma_sq_mc",
    "simulate_share",
    "stein_bracket",
    "theta",
]

__version__ = "0.1.0"
