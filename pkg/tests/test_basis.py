import numpy as np
import pytest
from hypothesis import given, strategies as st

from chsbattery import ModelParams, dim_chs, dim_hs, flat_index, unflatten
from chsbattery.basis import initial_state_chs, initial_state_hs, m_values
from chsbattery.operators import build_h_b


def test_dimensions():
    assert dim_chs(ModelParams(n_spins=10, n_ph=40)) == 451
    assert dim_chs(ModelParams(n_spins=1, n_ph=4)) == 10
    assert dim_chs(ModelParams(n_spins=2, n_ph=8)) == 27
    assert dim_hs(ModelParams(n_spins=10)) == 11


def test_default_cutoff_is_4n():
    assert ModelParams(n_spins=7).n_ph == 28
    assert ModelParams(n_spins=7, n_ph=10).n_ph == 10


def test_resonance_defaults():
    p = ModelParams()
    assert p.omega_a == 1.0 and p.omega_c == 1.0
    assert p.n_spins == 10 and p.g1 == 2.0 and p.gamma == 0.5 and p.delta == 2.0


def test_invalid_params_rejected():
    with pytest.raises(ValueError, match="n_spins"):
        ModelParams(n_spins=0)
    with pytest.raises(ValueError, match="n_ph"):
        ModelParams(n_spins=5, n_ph=4)
    with pytest.raises(ValueError, match="g1"):
        ModelParams(g1=float("nan"))


def test_flat_index_examples():
    p = ModelParams(n_spins=10)
    assert flat_index(0, 0, p) == 0
    assert flat_index(1, 0, p) == 11
    assert unflatten(23, p) == (2, 1)


@pytest.mark.parametrize("n_spins,n_ph", [(1, 4), (3, 12), (12, 48)])
def test_flat_index_bijection_exhaustive(n_spins, n_ph):
    p = ModelParams(n_spins=n_spins, n_ph=n_ph)
    seen = set()
    for n in range(n_ph + 1):
        for q in range(n_spins + 1):
            i = flat_index(n, q, p)
            assert unflatten(i, p) == (n, q)
            seen.add(i)
    assert seen == set(range(dim_chs(p)))


@given(data=st.data(), n_spins=st.integers(1, 12))
def test_flat_index_roundtrip_property(data, n_spins):
    p = ModelParams(n_spins=n_spins)
    n = data.draw(st.integers(0, p.n_ph))
    q = data.draw(st.integers(0, n_spins))
    assert unflatten(flat_index(n, q, p), p) == (n, q)


def test_flat_index_range_errors():
    p = ModelParams(n_spins=2, n_ph=8)
    with pytest.raises(ValueError):
        flat_index(9, 0, p)
    with pytest.raises(ValueError):
        flat_index(0, 3, p)
    with pytest.raises(ValueError):
        unflatten(dim_chs(p), p)


def test_initial_state_chs():
    p = ModelParams(n_spins=10)
    psi = initial_state_chs(p)
    assert psi[10 * 11 + 10] == 1.0
    assert np.linalg.norm(psi) == 1.0
    p1 = ModelParams(n_spins=1, n_ph=4)
    psi1 = initial_state_chs(p1)
    assert psi1[flat_index(1, 1, p1)] == 1.0


def test_initial_state_hs():
    p = ModelParams(n_spins=10)
    psi = initial_state_hs(p)
    assert psi.shape == (11,)
    assert psi[10] == 1.0
    assert np.linalg.norm(psi) == 1.0
    mz = m_values(10)
    assert (np.abs(psi) ** 2 @ mz) == -5.0


@pytest.mark.parametrize("model", ["chs", "hs"])
def test_initial_states_are_jz_eigenvectors(model):
    p = ModelParams(n_spins=6, n_ph=24)
    psi = initial_state_chs(p) if model == "chs" else initial_state_hs(p)
    h_b = build_h_b(p, model)
    expect = -p.n_spins / 2.0 * p.omega_a
    assert np.allclose(h_b @ psi, expect * psi, atol=1e-14)
    assert np.vdot(psi, h_b @ psi).real == pytest.approx(expect, abs=1e-14)
