"""Exact-diagonalization simulator for collective-spin quantum batteries.

Two charging setups share one API: a chain of N spin-1/2 sites with
all-to-all anisotropic exchange coupled to a single cavity mode (``chs``),
and the bare chain charged by its own interactions (``hs``).  Everything
lives in the conserved maximal-spin sector, with the photon space
truncated at a configurable cutoff.
"""
from .basis import (
    ModelParams,
    dim_chs,
    dim_hs,
    flat_index,
    initial_state_chs,
    initial_state_hs,
    unflatten,
)
from .dynamics import (
    EnergyTrace,
    SpectralDecomposition,
    decompose,
    default_horizon,
    energy_trace,
    evolve,
    stored_energy,
)
from .groundinfo import (
    WignerGrid,
    ground_hamiltonian,
    ground_state,
    log_negativity,
    order_parameter,
    partial_transpose_battery,
    peak_count,
    reduce,
    von_neumann_entropy,
    wigner,
    wigner_axes,
)
from .operators import (
    build_h_b,
    build_h_c,
    build_h_hs,
    build_hamiltonian,
    collective_operators,
    matrix_element_chs,
    matrix_element_hs,
    pauli_oracle,
)
from .sweepfit import (
    CutoffReport,
    ScalingFit,
    ScalingStudy,
    SweepGrid,
    cutoff_convergence,
    fit_power_law,
    scaling_study,
    sweep2d,
)

__version__ = "0.1.0"
