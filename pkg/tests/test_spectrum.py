import math

import numpy as np
import pytest

from nmrqi.oracle import SX, I2
from nmrqi.spectrum import (
    allowed_transitions,
    assign_peaks,
    line_amplitudes,
    roofing_factor,
    scenario_params,
    synthesize_trace,
    trace_peaks,
)
from nmrqi.spin_system import SpinParams, derive_params, eigenbasis
from nmrqi.thermal import density_from_populations, regime, thermal_density_matrix

IX = 0.5 * (np.kron(SX, I2) + np.kron(I2, SX))


def test_frequencies_match_level_differences():
    p = SpinParams.from_sum_diff(5.0, 2.0, 1.0, 1.0)
    d = derive_params(p).d_gap
    got = sorted(round(ln.frequency, 12) for ln in allowed_transitions(p))
    want = sorted(round(abs(f), 12) for f in ((5 + d + 1) / 2, (5 + d - 1) / 2, (5 - d + 1) / 2, (5 - d - 1) / 2))
    assert got == want


def test_roofing_matches_transition_matrix_elements():
    for od in (0.3, 1.0, 2.5, 6.0):
        p = SpinParams.from_sum_diff(8.0, od, 1.0, 1.0)
        theta = derive_params(p).theta
        v = eigenbasis(p)
        for ln in allowed_transitions(p):
            i, j = ln.pair
            element = abs(v[:, i - 1] @ IX @ v[:, j - 1]) ** 2
            assert element == pytest.approx(roofing_factor(ln.pair, theta) / 4, abs=1e-12)


def test_zero_flip_gives_zero_trace():
    p = SpinParams.from_sum_diff(3.0, 1.0, 1.0, 0.1)
    lines = line_amplitudes(thermal_density_matrix(p), p, 0.0)
    trace = synthesize_trace(lines)
    assert np.all(trace.intensity == 0)
    assert trace_peaks(trace).size == 0


def test_flip_angle_validated():
    p = SpinParams.from_sum_diff(3.0, 1.0, 1.0, 0.1)
    with pytest.raises(ValueError):
        line_amplitudes(thermal_density_matrix(p), p, 2.0)


def test_infinite_temperature_is_silent():
    p = SpinParams.from_sum_diff(3.0, 1.0, 1.0, 1e12)
    lines = line_amplitudes(thermal_density_matrix(p), p, 0.1)
    assert max(abs(ln.amplitude) for ln in lines) < 1e-10


def test_single_lorentzian_peak_height_and_position():
    p = SpinParams.from_sum_diff(4.0, 2.0, 1.0, 0.5)
    lines = line_amplitudes(thermal_density_matrix(p), p, math.radians(10))
    top = max(lines, key=lambda ln: abs(ln.amplitude))
    trace = synthesize_trace([top], 0.02, (0.0, 6.0, 6001))
    k = np.argmax(np.abs(trace.intensity))
    assert trace.frequency_axis[k] == pytest.approx(top.frequency, abs=1e-3)
    assert abs(trace.intensity[k]) == pytest.approx(abs(top.amplitude), rel=1e-3)


def test_assign_prefers_strongest_coincident_line():
    p = scenario_params(math.pi / 4, "crossing")
    lines = line_amplitudes(thermal_density_matrix(p), p, 0.1)
    trace = synthesize_trace(lines)
    assert assign_peaks(trace_peaks(trace), lines, 0.06) == ["2<->4"]


@pytest.mark.parametrize("theta_deg", [45, 30, 10])
def test_scenario_params_hit_requested_angle_and_regime(theta_deg):
    theta = math.radians(theta_deg)
    for name in ("low", "crossing", "high"):
        p = scenario_params(theta, name)
        assert derive_params(p).theta == pytest.approx(theta)
        assert regime(p, 1e-9) == name


def test_lorentzian_half_maximum_and_linearity():
    from nmrqi.spectrum import TransitionLine

    line = TransitionLine(2, 1, 1.0, 1.0)
    trace = synthesize_trace([line], 0.05, (0.95, 1.05, 3))
    assert np.allclose(trace.intensity, [0.5, 1.0, 0.5])
    double = synthesize_trace([line, line], 0.05, (0.95, 1.05, 3))
    assert np.allclose(double.intensity, 2 * trace.intensity)
    assert np.all(synthesize_trace([]).intensity == 0)
    with pytest.raises(ValueError):
        synthesize_trace([line], 0.05, (1.0, 1.0, 10))


def test_roofing_sum_and_amplitude_antisymmetry():
    for theta in np.linspace(0.05, 1.5, 7):
        assert roofing_factor((1, 2), theta) + roofing_factor((1, 3), theta) == pytest.approx(2.0)
    p = SpinParams.from_sum_diff(4.0, 1.5, 1.0, 0.3)
    theta = derive_params(p).theta
    pops = np.array([0.1, 0.2, 0.3, 0.4])
    base = line_amplitudes(density_from_populations(pops, theta), p, 0.1)
    for k, line in enumerate(base):
        swapped = pops.copy()
        i, j = line.from_level - 1, line.to_level - 1
        swapped[[i, j]] = swapped[[j, i]]
        flipped = line_amplitudes(density_from_populations(swapped, theta), p, 0.1)[k]
        assert flipped.amplitude == pytest.approx(-line.amplitude)
