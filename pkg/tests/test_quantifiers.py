import math

import numpy as np
import pytest

from nmrqi.quantifiers import (
    coherence_relative_entropy,
    concurrence_check,
    concurrence_pure,
    density_eigenvalues,
    diagonal_entropy,
    fidelity_with_pure,
    mixedness,
    mixedness_closed_form,
    mixedness_homonuclear_zero_field,
    mixedness_zero_field,
    purity,
    von_neumann_entropy,
)
from nmrqi.spin_system import SpinParams, eigenbasis_from_theta
from nmrqi.thermal import thermal_density_matrix
from nmrqi.validation import haar_state, random_density_matrix, random_x_state


def test_entropy_basics():
    assert von_neumann_entropy([1, 0, 0, 0]) == 0
    assert von_neumann_entropy([0.25] * 4) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        von_neumann_entropy([0.5, 0.6, 0, 0])


def test_coherence_of_singlet_and_diagonal_states():
    singlet = np.array([0, 1, -1, 0]) / math.sqrt(2)
    assert coherence_relative_entropy(np.outer(singlet, singlet)) == pytest.approx(1.0)
    assert coherence_relative_entropy(np.diag([0.1, 0.2, 0.3, 0.4])) == 0.0


def test_coherence_matches_lapack_on_random_states():
    rng = np.random.default_rng(4)
    for _ in range(200):
        rho = random_density_matrix(rng)
        ref = diagonal_entropy(rho) - von_neumann_entropy(np.clip(np.linalg.eigvalsh(rho), 0, 1))
        assert coherence_relative_entropy(rho) == pytest.approx(max(ref, 0), abs=1e-9)


def test_x_state_path_uses_closed_form():
    rng = np.random.default_rng(6)
    rho = random_x_state(rng)
    assert np.allclose(np.sort(density_eigenvalues(rho)), np.linalg.eigvalsh(rho))


def test_mixedness_bounds():
    assert mixedness(np.eye(4) / 4) == pytest.approx(1.0)
    psi = haar_state(np.random.default_rng(0))
    assert mixedness(np.outer(psi, psi.conj())) == pytest.approx(0.0, abs=1e-14)
    assert purity(np.eye(4) / 4) == pytest.approx(0.25)


@pytest.mark.parametrize("ws, od, tau", [(0.0, 0.0, 0.3), (2.0, 0.0, 0.01), (3.7, 2.5, 0.5), (1.0, -1.0, 4.0)])
def test_closed_form_mixedness(ws, od, tau):
    p = SpinParams.from_sum_diff(ws, od, 1.0, tau)
    assert mixedness_closed_form(p) == pytest.approx(mixedness(thermal_density_matrix(p)), abs=1e-12)


def test_zero_field_forms():
    for tau in (0.05, 0.5, 2.0, 20.0):
        p = SpinParams.from_sum_diff(0.0, 0.0, 1.0, tau)
        m = mixedness(thermal_density_matrix(p))
        assert mixedness_zero_field(p) == pytest.approx(m, abs=1e-12)
        assert mixedness_homonuclear_zero_field(tau) == pytest.approx(m, abs=1e-12)
    # tiny tau: no overflow, pure singlet limit
    assert mixedness_homonuclear_zero_field(1e-4) == pytest.approx(0.0, abs=1e-12)
    assert mixedness_homonuclear_zero_field(1e9) == pytest.approx(1.0, abs=1e-8)


def test_homonuclear_denominator_with_two_fails_high_temperature_limit():
    # (e^{2bJ} + 3)/(e^{bJ} + 2)^2 tends to 4/9, i.e. M -> 20/27 instead of 1
    y = math.exp(1e-9)
    printed = 4 / 3 * (1 - (y * y + 3) / (y + 2) ** 2)
    assert printed == pytest.approx(20 / 27, abs=1e-8)
    assert abs(printed - mixedness_homonuclear_zero_field(1e9)) > 0.2


def test_closed_form_survives_extreme_beta():
    p = SpinParams.from_sum_diff(4.0, 2.5, 1.0, 1e-4)
    assert math.isfinite(mixedness_closed_form(p))


def test_fidelity_requires_normalized_state():
    with pytest.raises(ValueError):
        fidelity_with_pure(np.eye(4) / 4, [1, 1, 0, 0])
    assert fidelity_with_pure(np.eye(4) / 4, [1, 0, 0, 0]) == pytest.approx(0.25)


def test_concurrence_of_phi3_is_sin_2theta():
    for theta in (0.1, 0.4, math.pi / 4):
        phi3 = eigenbasis_from_theta(theta)[:, 2]
        rho = np.outer(phi3, phi3)
        assert concurrence_check(rho) == pytest.approx(abs(math.sin(2 * theta)))
        assert concurrence_pure(phi3) == pytest.approx(abs(math.sin(2 * theta)))
