"""Ground-state diagnostics: order parameter, entanglement, Wigner function.

The bipartition is cavity x spin chain, available only in the ``chs``
basis.  The Wigner function uses the displaced-parity convention

    W(alpha) = (2/pi) Tr[rho_c D(alpha) Pi D(alpha)^dag],
    alpha = (x + i p) / sqrt(2),

so the vacuum gives W(0) = 2/pi and the integral over
d^2alpha = dx dp / 2 equals Tr(rho_c).  Using D(alpha) Pi D(alpha)^dag =
D(2 alpha) Pi, the matrix elements <m|D(2 alpha)|n> are evaluated in the
untruncated Fock space by a damped two-term recurrence (every element is
bounded by 1, so the recurrence cannot overflow); exponentiating the
truncated generator instead would stop the function from decaying at
large |alpha| and break the normalization.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import ModelParams, dim_chs, dim_hs, m_values
from .operators import build_h_b, build_h_c

__all__ = [
    "ground_hamiltonian",
    "ground_state",
    "order_parameter",
    "reduce",
    "von_neumann_entropy",
    "partial_transpose_battery",
    "log_negativity",
    "WignerGrid",
    "wigner",
    "wigner_axes",
    "peak_count",
]

EIGENVALUE_FLOOR = 1e-12


def ground_hamiltonian(params: ModelParams, which: str = "full") -> np.ndarray:
    """CHS Hamiltonian whose ground state is analyzed.

    ``full`` is H_B + H_C (charging switched on); ``charging`` drops the
    battery term and uses H_C alone.
    """
    if which == "full":
        return build_h_b(params, "chs") + build_h_c(params)
    if which == "charging":
        return build_h_c(params)
    raise ValueError(f"unknown ground Hamiltonian choice {which!r}")


def ground_state(h: np.ndarray) -> np.ndarray:
    """Normalized lowest eigenvector, largest-magnitude amplitude made real positive."""
    _, v = np.linalg.eigh(h)
    psi = v[:, 0].astype(complex)
    k = int(np.argmax(np.abs(psi)))
    psi *= np.conj(psi[k]) / abs(psi[k])
    return psi


def _mz_diagonal(params: ModelParams, dim: int) -> np.ndarray:
    ms = m_values(params.n_spins)
    if dim == dim_hs(params):
        return ms
    if dim == dim_chs(params):
        return np.tile(ms, params.n_ph + 1)
    raise ValueError(f"state dimension {dim} matches neither basis of {params}")


def order_parameter(psi: np.ndarray, params: ModelParams) -> float:
    """<Jz> / (N/2); -1 or +1 in the polarized phase, 0 deep in the plateau."""
    psi = np.asarray(psi)
    mz = _mz_diagonal(params, psi.size)
    return float((np.abs(psi) ** 2 @ mz).real / (params.n_spins / 2.0))


def _as_chs_density(state: np.ndarray, params: ModelParams) -> np.ndarray:
    state = np.asarray(state)
    dim = dim_chs(params)
    if state.ndim == 1:
        if state.size == dim_hs(params):
            raise ValueError("spin-only basis has no cavity/battery bipartition")
        if state.size != dim:
            raise ValueError(f"state dimension {state.size} does not match {dim}")
        return np.outer(state, state.conj())
    if state.shape != (dim, dim):
        if state.shape == (dim_hs(params),) * 2:
            raise ValueError("spin-only basis has no cavity/battery bipartition")
        raise ValueError(f"density matrix shape {state.shape} does not match {dim}")
    return state


def reduce(state: np.ndarray, keep: str, params: ModelParams) -> np.ndarray:
    """Partial trace of a CHS pure state or density matrix.

    ``keep`` selects the surviving subsystem: ``cavity`` traces out the
    spins, ``battery`` traces out the photon mode.
    """
    np_dim = params.n_ph + 1
    ns_dim = params.n_spins + 1
    state = np.asarray(state)
    if state.ndim == 1 and state.size == dim_chs(params):
        block = state.reshape(np_dim, ns_dim)
        if keep == "cavity":
            return block @ block.conj().T
        if keep == "battery":
            return block.T @ block.conj()
        raise ValueError(f"unknown subsystem {keep!r}")
    rho = _as_chs_density(state, params).reshape(np_dim, ns_dim, np_dim, ns_dim)
    if keep == "cavity":
        return np.trace(rho, axis1=1, axis2=3)
    if keep == "battery":
        return np.trace(rho, axis1=0, axis2=2)
    raise ValueError(f"unknown subsystem {keep!r}")


def von_neumann_entropy(rho: np.ndarray) -> float:
    """-sum lambda log2 lambda over eigenvalues, 0 log 0 := 0."""
    lam = np.linalg.eigvalsh(np.asarray(rho))
    lam = lam[lam > EIGENVALUE_FLOOR]
    if lam.size == 0:
        return 0.0
    return float(-(lam * np.log2(lam)).sum())


def partial_transpose_battery(rho: np.ndarray, params: ModelParams) -> np.ndarray:
    """Transpose the spin indices: (n q | n' q') -> (n q' | n' q)."""
    np_dim = params.n_ph + 1
    ns_dim = params.n_spins + 1
    rho4 = _as_chs_density(rho, params).reshape(np_dim, ns_dim, np_dim, ns_dim)
    return rho4.transpose(0, 3, 2, 1).reshape(np_dim * ns_dim, np_dim * ns_dim)


def log_negativity(rho: np.ndarray, params: ModelParams) -> float:
    """log2 of the trace norm of the partial transpose, clamped at 0."""
    pt = partial_transpose_battery(rho, params)
    trace_norm = float(np.abs(np.linalg.eigvalsh(pt)).sum())
    value = math.log2(trace_norm)
    return value if value > EIGENVALUE_FLOOR else 0.0


@dataclass(frozen=True)
class WignerGrid:
    """Phase-space samples W[i, j] = W(xs[i], ps[j]), displaced-parity convention."""

    xs: np.ndarray
    ps: np.ndarray
    values: np.ndarray
    max_imag: float
    convention: str = "displaced-parity"

    def phase_space_integral(self) -> float:
        """Riemann sum of W over d^2alpha = dx dp / 2; 1 for well-contained states."""
        dx = self.xs[1] - self.xs[0] if self.xs.size > 1 else 1.0
        dp = self.ps[1] - self.ps[0] if self.ps.size > 1 else 1.0
        return float(self.values.sum() * dx * dp / 2.0)


def wigner_axes(n_ph: int, points: int = 101) -> np.ndarray:
    """Default quadrature axis covering |x| <= 2 sqrt(n_ph)."""
    extent = 2.0 * math.sqrt(n_ph)
    return np.linspace(-extent, extent, points)


def wigner(rho_c: np.ndarray, xs, ps) -> WignerGrid:
    """Wigner function of a cavity density matrix on a rectangular grid.

    Expands W = sum_{m,n} rho[m,n] K_mn over the transition kernels
    K_mn = (2/pi) Tr[|m><n| D(2 alpha) Pi].  With x = 4 |alpha|^2,
    phi = arg(alpha), and the damped Laguerre functions

        l[m, k](x) = sqrt(m! / (m+k)!) x^(k/2) e^(-x/2) L_m^(k)(x),

    the kernels on and above the diagonal (n = m + k, k >= 0) read

        K_mn = (2/pi) (-1)^m e^(i k phi) l[m, k](x),

    and K_nm = conj(K_mn) folds the lower triangle into real parts.
    Each l[m, k] is the modulus of a displacement-operator matrix element,
    hence bounded by 1, and the upward-degree recurrence

        sqrt(m (m+k)) l[m, k] = (2m + k - 1 - x) l[m-1, k]
                                - sqrt((m-1)(m+k-1)) l[m-2, k]

    tracks the dominant solution, so the evaluation stays stable at large
    cutoff and large |alpha| where naive schemes overflow.
    """
    rho_c = np.asarray(rho_c)
    if rho_c.ndim != 2 or rho_c.shape[0] != rho_c.shape[1]:
        raise ValueError(f"expected a square density matrix, got shape {rho_c.shape}")
    xs = np.asarray(xs, dtype=float)
    ps = np.asarray(ps, dtype=float)
    if xs.size == 0 or ps.size == 0:
        raise ValueError("empty Wigner grid")

    dim = rho_c.shape[0]
    alpha = (xs[:, None] + 1j * ps[None, :]) / math.sqrt(2.0)
    x = 4.0 * np.abs(alpha) ** 2
    sqrt_x = np.sqrt(x)
    phase = np.exp(1j * np.angle(alpha))

    accum = np.zeros(alpha.shape)
    diag_imag = np.zeros(alpha.shape)
    head = np.exp(-0.5 * x)  # l[0, k] for the current diagonal
    phase_k = np.ones(alpha.shape, dtype=complex)  # e^{i k phi}
    for k in range(dim):
        if k > 0:
            head = head * sqrt_x / math.sqrt(k)
            phase_k = phase_k * phase
        series_re = np.zeros(alpha.shape)
        series_im = np.zeros(alpha.shape)
        l_prev = np.zeros(alpha.shape)
        l_curr = head
        for m in range(dim - k):
            weight = rho_c[m, m + k] if m % 2 == 0 else -rho_c[m, m + k]
            weight = complex(weight)
            if weight.real != 0.0:
                series_re += weight.real * l_curr
            if weight.imag != 0.0:
                series_im += weight.imag * l_curr
            nxt = m + 1
            l_next = (
                (2 * nxt + k - 1 - x) * l_curr - math.sqrt(m * (m + k)) * l_prev
            ) / math.sqrt(nxt * (nxt + k))
            l_prev, l_curr = l_curr, l_next
        if k == 0:
            accum += series_re
            diag_imag += series_im
        else:
            # rho[m,m+k] K_mn + rho[m+k,m] conj(K_mn) = 2 Re(...)
            accum += 2.0 * (series_re * phase_k.real - series_im * phase_k.imag)

    values = (2.0 / math.pi) * accum
    max_imag = (2.0 / math.pi) * float(np.abs(diag_imag).max())
    return WignerGrid(xs=xs, ps=ps, values=values, max_imag=max_imag)


def peak_count(grid: WignerGrid, threshold: float = 0.1) -> int:
    """Strict 8-neighborhood local maxima above ``threshold * max(W)``."""
    w = grid.values
    w_max = w.max()
    if w_max <= 0.0:
        return 0
    padded = np.full((w.shape[0] + 2, w.shape[1] + 2), -np.inf)
    padded[1:-1, 1:-1] = w
    center = padded[1:-1, 1:-1]
    is_peak = center > threshold * w_max
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            shifted = padded[1 + di : padded.shape[0] - 1 + di, 1 + dj : padded.shape[1] - 1 + dj]
            is_peak &= center > shifted
    return int(is_peak.sum())
