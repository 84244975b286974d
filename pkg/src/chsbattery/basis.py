"""Truncated Hilbert spaces, index maps, and initial states.

Two bases are used throughout:

* ``chs`` -- product basis |n, q> of a single bosonic mode (photon number
  n = 0..n_ph) and the symmetric spin sector of N spin-1/2 sites, labelled
  by the number q = 0..N of lowered spins, so m = N/2 - q.  Flat index is
  row-major in n: ``i = n*(N+1) + q``.
* ``hs`` -- the bare (N+1)-dimensional spin sector, labelled by q alone.

The total spin j = N/2 is conserved by every Hamiltonian in this package,
so no other spin sectors are ever represented.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "ModelParams",
    "dim_chs",
    "dim_hs",
    "flat_index",
    "unflatten",
    "initial_state_chs",
    "initial_state_hs",
    "m_values",
]


@dataclass(frozen=True)
class ModelParams:
    """Physical and numerical knobs of the battery models.

    ``n_ph`` defaults to ``4 * n_spins``; pass an explicit value to probe
    cutoff convergence.  Couplings are dimensionless, frequencies are in
    angular-frequency units with the resonance convention
    ``omega_a = omega_c = 1`` as the default.
    """

    n_spins: int = 10
    g1: float = 2.0
    g2: float = 0.5
    gamma: float = 0.5
    delta: float = 2.0
    omega_a: float = 1.0
    omega_c: float = 1.0
    n_ph: int | None = None

    def __post_init__(self) -> None:
        if int(self.n_spins) != self.n_spins or self.n_spins < 1:
            raise ValueError(f"n_spins must be a positive integer, got {self.n_spins!r}")
        object.__setattr__(self, "n_spins", int(self.n_spins))
        if self.n_ph is None:
            object.__setattr__(self, "n_ph", 4 * self.n_spins)
        else:
            if int(self.n_ph) != self.n_ph or self.n_ph < 1:
                raise ValueError(f"n_ph must be a positive integer, got {self.n_ph!r}")
            object.__setattr__(self, "n_ph", int(self.n_ph))
        # the CHS initial state puts n = N photons in the cavity
        if self.n_ph < self.n_spins:
            raise ValueError(
                f"n_ph={self.n_ph} is smaller than n_spins={self.n_spins}; "
                "the cutoff cannot host the initial Fock state"
            )
        for name in ("g1", "g2", "gamma", "delta", "omega_a", "omega_c"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))

    @property
    def j(self) -> float:
        """Conserved total spin, N/2."""
        return self.n_spins / 2.0

    def with_spins(self, n_spins: int, nph_factor: int = 4) -> "ModelParams":
        """Same couplings at a different chain length, cutoff ``nph_factor * N``."""
        return replace(self, n_spins=n_spins, n_ph=nph_factor * n_spins)


def dim_chs(params: ModelParams) -> int:
    """Dimension (n_ph + 1)(N + 1) of the photon x spin product space."""
    return (params.n_ph + 1) * (params.n_spins + 1)


def dim_hs(params: ModelParams) -> int:
    """Dimension N + 1 of the bare spin space."""
    return params.n_spins + 1


def flat_index(n: int, q: int, params: ModelParams) -> int:
    """Flat index of the basis label (n, q); row-major in n."""
    if not 0 <= n <= params.n_ph:
        raise ValueError(f"photon label n={n} outside 0..{params.n_ph}")
    if not 0 <= q <= params.n_spins:
        raise ValueError(f"spin label q={q} outside 0..{params.n_spins}")
    return n * (params.n_spins + 1) + q


def unflatten(index: int, params: ModelParams) -> tuple[int, int]:
    """Inverse of :func:`flat_index`."""
    if not 0 <= index < dim_chs(params):
        raise ValueError(f"flat index {index} outside 0..{dim_chs(params) - 1}")
    n, q = divmod(index, params.n_spins + 1)
    return n, q


def m_values(n_spins: int) -> np.ndarray:
    """Magnetization m = N/2 - q for q = 0..N."""
    return n_spins / 2.0 - np.arange(n_spins + 1)


def initial_state_chs(params: ModelParams) -> np.ndarray:
    """|N photons> x |all spins down>, i.e. unit amplitude at (n=N, q=N)."""
    if params.n_ph < params.n_spins:
        raise ValueError("photon cutoff too small to host N photons")
    psi = np.zeros(dim_chs(params), dtype=complex)
    psi[flat_index(params.n_spins, params.n_spins, params)] = 1.0
    return psi


def initial_state_hs(params: ModelParams) -> np.ndarray:
    """All spins down: unit amplitude at q = N in the spin basis."""
    psi = np.zeros(dim_hs(params), dtype=complex)
    psi[params.n_spins] = 1.0
    return psi
