"""Coarse-grained effective dynamics toolkit.

Thin re-export of the compiled extension module.
"""

from _effdyn import (  # noqa: F401
    BlochVector,
    channel_fidelity,
    dispersion,
    effective_walk_block,
    exp_i_hermitian,
    gamma_factor,
    haar_unitary,
    kron,
    maximize_fidelity,
    mean_field_h_ir,
    mu,
    mu_dirac_closed,
    mu_dirac_generic,
    packet_uv_bloch,
    partial_trace,
    phase_align,
    predicted_fidelity,
    trace_distance,
    trace_distance_series,
    walk_unitary,
)

__all__ = [
    "BlochVector",
    "channel_fidelity",
    "dispersion",
    "effective_walk_block",
    "exp_i_hermitian",
    "gamma_factor",
    "haar_unitary",
    "kron",
    "maximize_fidelity",
    "mean_field_h_ir",
    "mu",
    "mu_dirac_closed",
    "mu_dirac_generic",
    "packet_uv_bloch",
    "partial_trace",
    "phase_align",
    "predicted_fidelity",
    "trace_distance",
    "trace_distance_series",
    "walk_unitary",
]

__version__ = "1.0.0"
