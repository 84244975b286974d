"""Collective operators, Hamiltonians, and an independent Pauli-basis oracle.

The battery Hamiltonian is ``H_B = omega_a * Jz``.  The charging term for
the cavity-coupled chain is

    H_C = omega_c a^dag a + 2 g1 Jx (a^dag + a)
        + omega_a g2 [J+J- + J-J+ + gamma (J+^2 + J-^2) + 2 delta Jz^2
                      - (N/2)(2 + delta)]

and the bare-chain variant replaces the cavity terms with nothing:
``H_HS = omega_a Jz + omega_a g2 [same bracket]``.

All matrices are real float64 (every term is real symmetric in these
bases); states remain complex.  Primary assembly is by operator algebra;
the closed-form matrix elements are an independent cross-check and carry
a single global ``omega_c`` prefactor, so they agree with the operator
assembly at resonance ``omega_a == omega_c``.
"""
from __future__ import annotations

import math

import numpy as np

from .basis import ModelParams, dim_chs, m_values

__all__ = [
    "ladder_amp",
    "collective_operators",
    "build_h_b",
    "build_h_c",
    "build_h_hs",
    "build_hamiltonian",
    "matrix_element_chs",
    "matrix_element_hs",
    "closed_form_h_chs",
    "closed_form_h_hs",
    "pauli_oracle",
    "pauli_h_b",
    "pauli_oracle_hs",
    "symmetric_isometry",
    "chs_isometry",
    "total_spin_squared",
    "assert_hermitian",
]

PAULI_ORACLE_MAX_SPINS = 8


def ladder_amp(j: float, m: float, dm: int) -> float:
    """Matrix element of J+ (dm=+1) or J- (dm=-1): sqrt(j(j+1) - m(m+dm))."""
    arg = j * (j + 1) - m * (m + dm)
    return math.sqrt(arg) if arg > 0.0 else 0.0


def _spin_ops(n_spins: int) -> dict[str, np.ndarray]:
    j = n_spins / 2.0
    dim = n_spins + 1
    ms = m_values(n_spins)
    jz = np.diag(ms)
    jp = np.zeros((dim, dim))
    for q in range(1, dim):  # J+ maps q -> q-1
        jp[q - 1, q] = ladder_amp(j, ms[q], +1)
    jm = jp.T.copy()
    jx = 0.5 * (jp + jm)
    return {"jp": jp, "jm": jm, "jz": jz, "jx": jx}


def _boson_ops(n_ph: int) -> dict[str, np.ndarray]:
    a = np.zeros((n_ph + 1, n_ph + 1))
    for n in range(n_ph):
        a[n, n + 1] = math.sqrt(n + 1)  # top transition out of n_ph is dropped
    return {"a": a, "adag": a.T.copy()}


def collective_operators(params: ModelParams, model: str = "chs") -> dict[str, np.ndarray]:
    """Collective spin (and, for ``chs``, photon) operators in the flat basis.

    Returns ``jp, jm, jz, jx`` in either basis; the ``chs`` set adds
    ``a`` and ``adag`` and tensor-extends everything over the photon index.
    """
    spin = _spin_ops(params.n_spins)
    if model == "hs":
        return spin
    if model != "chs":
        raise ValueError(f"unknown model {model!r}")
    bos = _boson_ops(params.n_ph)
    eye_s = np.eye(params.n_spins + 1)
    eye_p = np.eye(params.n_ph + 1)
    ops = {k: np.kron(eye_p, v) for k, v in spin.items()}
    ops["a"] = np.kron(bos["a"], eye_s)
    ops["adag"] = np.kron(bos["adag"], eye_s)
    return ops


def _spin_bracket(params: ModelParams) -> np.ndarray:
    """The g2 interaction bracket in the (N+1)-dim spin space, constant included."""
    spin = _spin_ops(params.n_spins)
    jp, jm, jz = spin["jp"], spin["jm"], spin["jz"]
    bracket = jp @ jm + jm @ jp
    bracket += params.gamma * (jp @ jp + jm @ jm)
    bracket += 2.0 * params.delta * (jz @ jz)
    bracket -= (params.n_spins / 2.0) * (2.0 + params.delta) * np.eye(params.n_spins + 1)
    return bracket


def build_h_b(params: ModelParams, model: str = "chs") -> np.ndarray:
    """Battery Hamiltonian omega_a * Jz in the requested basis."""
    jz = _spin_ops(params.n_spins)["jz"]
    if model == "hs":
        return params.omega_a * jz
    if model != "chs":
        raise ValueError(f"unknown model {model!r}")
    return params.omega_a * np.kron(np.eye(params.n_ph + 1), jz)


def build_h_c(params: ModelParams) -> np.ndarray:
    """Charging Hamiltonian of the cavity-coupled chain (CHS basis)."""
    bos = _boson_ops(params.n_ph)
    jx = _spin_ops(params.n_spins)["jx"]
    eye_s = np.eye(params.n_spins + 1)
    eye_p = np.eye(params.n_ph + 1)
    h = params.omega_c * np.kron(bos["adag"] @ bos["a"], eye_s)
    h += 2.0 * params.g1 * np.kron(bos["adag"] + bos["a"], jx)
    h += params.omega_a * params.g2 * np.kron(eye_p, _spin_bracket(params))
    return h


def build_h_hs(params: ModelParams) -> np.ndarray:
    """Full Hamiltonian of the bare chain, battery term included (HS basis)."""
    jz = _spin_ops(params.n_spins)["jz"]
    return params.omega_a * jz + params.omega_a * params.g2 * _spin_bracket(params)


def build_hamiltonian(params: ModelParams, model: str = "chs") -> tuple[np.ndarray, np.ndarray]:
    """(H_B, H) pair used for charging: H = H_B + H_C (chs) or H_HS (hs)."""
    if model == "chs":
        h_b = build_h_b(params, "chs")
        return h_b, h_b + build_h_c(params)
    if model == "hs":
        return build_h_b(params, "hs"), build_h_hs(params)
    raise ValueError(f"unknown model {model!r}")


def matrix_element_chs(n2: int, q2: int, n1: int, q1: int, params: ModelParams) -> float:
    """Closed-form element <n2, q2| (H_B + H_C) |n1, q1>.

    Selection rules: the coupling term pairs a photon step of +-1 with a
    spin step of -+1 or +-1; the gamma term steps the spin by +-2 at fixed
    photon number; everything else is diagonal.  The two-step amplitudes
    are attached to the m-lowering/raising elements so the matrix is
    Hermitian (the raising amplitude evaluated at the ket's m belongs to
    q2 = q1 - 2, and vice versa).
    """
    N = params.n_spins
    for label, n in (("n2", n2), ("n1", n1)):
        if not 0 <= n <= params.n_ph:
            raise ValueError(f"{label}={n} outside 0..{params.n_ph}")
    for label, q in (("q2", q2), ("q1", q1)):
        if not 0 <= q <= N:
            raise ValueError(f"{label}={q} outside 0..{N}")

    j = N / 2.0
    m = j - q1
    dn = n2 - n1
    dq = q2 - q1
    val = 0.0
    if dn == 0 and dq == 0:
        val += n1 + m
        val += params.g2 * (
            (j * (j + 1) - m * (m - 1))
            + (j * (j + 1) - m * (m + 1))
            + 2.0 * params.delta * m * m
            - (N / 2.0) * (2.0 + params.delta)
        )
    elif dn == 0 and dq == 2:
        # m2 = m - 2: two lowering steps
        val += params.g2 * params.gamma * ladder_amp(j, m, -1) * ladder_amp(j, m - 1, -1)
    elif dn == 0 and dq == -2:
        # m2 = m + 2: two raising steps
        val += params.g2 * params.gamma * ladder_amp(j, m, +1) * ladder_amp(j, m + 1, +1)
    elif dn == 1 and dq == 1:
        val += params.g1 * math.sqrt(n1 + 1) * ladder_amp(j, m, -1)
    elif dn == 1 and dq == -1:
        val += params.g1 * math.sqrt(n1 + 1) * ladder_amp(j, m, +1)
    elif dn == -1 and dq == 1:
        val += params.g1 * math.sqrt(n1) * ladder_amp(j, m, -1)
    elif dn == -1 and dq == -1:
        val += params.g1 * math.sqrt(n1) * ladder_amp(j, m, +1)
    return params.omega_c * val


def matrix_element_hs(q2: int, q1: int, params: ModelParams) -> float:
    """Closed-form element <q2| H_HS |q1> of the bare-chain Hamiltonian."""
    N = params.n_spins
    for label, q in (("q2", q2), ("q1", q1)):
        if not 0 <= q <= N:
            raise ValueError(f"{label}={q} outside 0..{N}")
    j = N / 2.0
    m = j - q1
    dq = q2 - q1
    val = 0.0
    if dq == 0:
        val += m
        val += params.g2 * (
            (j * (j + 1) - m * (m - 1))
            + (j * (j + 1) - m * (m + 1))
            + 2.0 * params.delta * m * m
            - (N / 2.0) * (2.0 + params.delta)
        )
    elif dq == 2:
        val += params.g2 * params.gamma * ladder_amp(j, m, -1) * ladder_amp(j, m - 1, -1)
    elif dq == -2:
        val += params.g2 * params.gamma * ladder_amp(j, m, +1) * ladder_amp(j, m + 1, +1)
    return params.omega_a * val


def closed_form_h_chs(params: ModelParams) -> np.ndarray:
    """Assemble H_B + H_C entirely from the closed-form matrix elements."""
    N = params.n_spins
    dim = dim_chs(params)
    h = np.zeros((dim, dim))
    for n1 in range(params.n_ph + 1):
        for q1 in range(N + 1):
            col = n1 * (N + 1) + q1
            for dn, dq in ((0, 0), (0, 2), (0, -2), (1, 1), (1, -1), (-1, 1), (-1, -1)):
                n2, q2 = n1 + dn, q1 + dq
                if 0 <= n2 <= params.n_ph and 0 <= q2 <= N:
                    h[n2 * (N + 1) + q2, col] = matrix_element_chs(n2, q2, n1, q1, params)
    return h


def closed_form_h_hs(params: ModelParams) -> np.ndarray:
    """Assemble H_HS entirely from the closed-form matrix elements."""
    N = params.n_spins
    h = np.zeros((N + 1, N + 1))
    for q1 in range(N + 1):
        for dq in (0, 2, -2):
            q2 = q1 + dq
            if 0 <= q2 <= N:
                h[q2, q1] = matrix_element_hs(q2, q1, params)
    return h


# --- brute-force Pauli-basis oracle -----------------------------------------

_SX = np.array([[0.0, 1.0], [1.0, 0.0]])
_ISY = np.array([[0.0, 1.0], [-1.0, 0.0]])  # i * sigma_y, kept real
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]])


def _site_op(op: np.ndarray, site: int, n_spins: int) -> np.ndarray:
    full = np.array([[1.0]])
    for k in range(n_spins):
        full = np.kron(full, op if k == site else np.eye(2))
    return full


def _check_oracle_size(n_spins: int) -> None:
    if n_spins > PAULI_ORACLE_MAX_SPINS:
        raise ValueError(
            f"Pauli oracle is limited to n_spins <= {PAULI_ORACLE_MAX_SPINS}, got {n_spins}"
        )


def _pauli_spin_terms(params: ModelParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(sum_i sigma^x_i, pair interaction sum, Jz) on the 2^N spin space."""
    N = params.n_spins
    sx = [_site_op(_SX, i, N) for i in range(N)]
    isy = [_site_op(_ISY, i, N) for i in range(N)]
    sz = [_site_op(_SZ, i, N) for i in range(N)]
    sx_sum = sum(sx)
    pairs = np.zeros_like(sx_sum)
    for i in range(N):
        for k in range(i + 1, N):
            pairs += (1.0 + params.gamma) * (sx[i] @ sx[k])
            pairs -= (1.0 - params.gamma) * (isy[i] @ isy[k])  # sy sy = -(i sy)(i sy)
            pairs += params.delta * (sz[i] @ sz[k])
    jz = 0.5 * sum(sz)
    return sx_sum, pairs, jz


def pauli_oracle(params: ModelParams) -> np.ndarray:
    """Literal site-summed H_B + H_C on the full (n_ph+1) x 2^N space.

    Independent of the collective construction: the restriction to the
    maximal-spin symmetric sector must reproduce ``build_hamiltonian``.
    """
    _check_oracle_size(params.n_spins)
    sx_sum, pairs, jz = _pauli_spin_terms(params)
    bos = _boson_ops(params.n_ph)
    eye_s = np.eye(2 ** params.n_spins)
    eye_p = np.eye(params.n_ph + 1)
    h = params.omega_a * np.kron(eye_p, jz)
    h += params.omega_c * np.kron(bos["adag"] @ bos["a"], eye_s)
    h += params.g1 * np.kron(bos["adag"] + bos["a"], sx_sum)
    h += params.omega_a * params.g2 * np.kron(eye_p, pairs)
    return h


def pauli_h_b(params: ModelParams) -> np.ndarray:
    """Battery Hamiltonian omega_a * Jz on the full (n_ph+1) x 2^N space."""
    _check_oracle_size(params.n_spins)
    _, _, jz = _pauli_spin_terms(params)
    return params.omega_a * np.kron(np.eye(params.n_ph + 1), jz)


def pauli_oracle_hs(params: ModelParams) -> np.ndarray:
    """Literal site-summed H_HS on the 2^N spin space."""
    _check_oracle_size(params.n_spins)
    _, pairs, jz = _pauli_spin_terms(params)
    return params.omega_a * jz + params.omega_a * params.g2 * pairs


def symmetric_isometry(n_spins: int) -> np.ndarray:
    """Isometry from the (N+1)-dim symmetric sector into the 2^N spin space.

    Column q is the normalized equal-weight state over all bitstrings with
    q down-spins (bit 1 = down), so it carries m = N/2 - q.
    """
    dim_full = 2 ** n_spins
    iso = np.zeros((dim_full, n_spins + 1))
    counts = np.array([bin(s).count("1") for s in range(dim_full)])
    for q in range(n_spins + 1):
        mask = counts == q
        iso[mask, q] = 1.0 / math.sqrt(mask.sum())
    return iso


def chs_isometry(params: ModelParams) -> np.ndarray:
    """Photon-extended symmetric-sector isometry for the oracle space."""
    return np.kron(np.eye(params.n_ph + 1), symmetric_isometry(params.n_spins))


def total_spin_squared(n_spins: int) -> np.ndarray:
    """J^2 = Jx^2 + Jy^2 + Jz^2 on the 2^N spin space (real representation)."""
    jx = 0.5 * sum(_site_op(_SX, i, n_spins) for i in range(n_spins))
    ijy = 0.5 * sum(_site_op(_ISY, i, n_spins) for i in range(n_spins))  # = i * Jy
    jz = 0.5 * sum(_site_op(_SZ, i, n_spins) for i in range(n_spins))
    return jx @ jx - ijy @ ijy + jz @ jz


def assert_hermitian(h: np.ndarray, tol: float = 1e-12) -> None:
    """Raise if max |H - H^dag| exceeds ``tol``."""
    dev = np.abs(h - h.conj().T).max()
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian: max deviation {dev:.3e} > {tol:.1e}")
