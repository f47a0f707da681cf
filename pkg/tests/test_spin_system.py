import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nmrqi.spin_system import (
    ParameterError,
    SpinParams,
    critical_omega_sigma,
    derive_params,
    eigenbasis,
    energy_levels,
    hamiltonian_matrix,
    mixing_angle,
)

freq = st.floats(-10, 10, allow_nan=False)
coupling = st.floats(0.05, 5)


def test_sum_diff_roundtrip():
    p = SpinParams.from_sum_diff(3.0, 1.0, 1.0, 0.5)
    assert (p.omega1, p.omega2) == (2.0, 1.0)
    assert (p.omega_sigma, p.omega_delta) == (3.0, 1.0)


@pytest.mark.parametrize("kwargs", [
    dict(omega1=1, omega2=1, j_coupling=0),
    dict(omega1=1, omega2=1, j_coupling=-1),
    dict(omega1=1, omega2=1, tau=-0.1),
    dict(omega1=math.nan, omega2=1),
    dict(omega1=1, omega2=math.inf),
])
def test_invalid_parameters_rejected(kwargs):
    with pytest.raises(ParameterError):
        SpinParams(**kwargs)


def test_zero_tau_allowed_with_infinite_beta():
    assert SpinParams(1, 1, 1, 0).beta == math.inf


def test_mixing_angle_ranges():
    assert mixing_angle(1.0, 0.0) == pytest.approx(math.pi / 4)
    assert 0 < mixing_angle(1.0, 5.0) < math.pi / 4
    assert math.pi / 4 < mixing_angle(1.0, -5.0) < math.pi / 2
    assert math.sin(2 * mixing_angle(1.0, 2.5)) == pytest.approx(1 / math.hypot(1, 2.5))


def test_homonuclear_gap_equals_j():
    d = derive_params(SpinParams.from_sum_diff(2.0, 0.0, 1.0))
    assert d.d_gap == pytest.approx(1.0)
    assert d.sin2theta == pytest.approx(1.0)


@given(freq, freq, coupling)
def test_eigenbasis_diagonalizes_hamiltonian(w1, w2, j):
    p = SpinParams(w1, w2, j)
    v = eigenbasis(p)
    h = v.T @ hamiltonian_matrix(p) @ v
    scale = 1 + abs(w1) + abs(w2) + j
    assert np.abs(h - np.diag(energy_levels(p).as_array())).max() < 1e-12 * scale


@given(freq, freq, coupling)
def test_energy_trace_and_eigenbasis_orthogonal(w1, w2, j):
    p = SpinParams(w1, w2, j)
    assert abs(sum(energy_levels(p).as_array())) < 1e-12 * (1 + abs(w1) + abs(w2) + j)
    v = eigenbasis(p)
    assert np.allclose(v.T @ v, np.eye(4), atol=1e-14)


def test_crossing_coupling_and_critical_field():
    for od in (0.0, 1.0, 2.5):
        ws = critical_omega_sigma(1.0, od)
        e = energy_levels(SpinParams.from_sum_diff(ws, od, 1.0))
        assert abs(e.e3 - e.e4) < 1e-12
    assert critical_omega_sigma(1.0, 0.0) == pytest.approx(2.0)
    assert critical_omega_sigma(1.0, 2.5) == pytest.approx(1 + math.sqrt(7.25))


def test_normalized_scales_frequencies_only():
    p = SpinParams(4.0, 2.0, 2.0, 0.3).normalized()
    assert (p.omega1, p.omega2, p.j_coupling, p.tau) == (2.0, 1.0, 1.0, 0.3)
