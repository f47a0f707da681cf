import math

import numpy as np
import pytest

from nmrqi.oracle import PPT_TOL, Separability, min_pt_eigenvalue, ppt_verdict
from nmrqi.quantifiers import concurrence_check
from nmrqi.spin_system import SpinParams
from nmrqi.thermal import thermal_density_matrix, zero_temperature_state
from nmrqi.witness import (
    SINGLET,
    Detection,
    FieldRatioError,
    boundary_tau,
    detection,
    params_from_field_ratio,
    phase_diagram,
    separability_conditions,
    witness_expectation,
    witness_fidelity_form,
    witness_operator,
    witness_report,
)
from nmrqi.validation import acceptance_grid, random_density_matrix, random_separable_state

GRID = [
    SpinParams.from_sum_diff(ws, od, 1.0, tau)
    for od in (0.0, 1.0, 2.5)
    for tau in np.linspace(0.05, 3, 25)
    for ws in np.linspace(0, 6, 25)
]


def test_witness_operator_spectrum():
    w = np.linalg.eigvalsh(witness_operator())
    assert np.allclose(w, [-0.5, 0.5, 0.5, 0.5])


def test_boundary_value_is_not_detected():
    assert detection(0.0) is Detection.NOT_DETECTED
    assert detection(-1e-15) is Detection.ENTANGLED_DETECTED


def test_random_states_forms_agree():
    rng = np.random.default_rng(1)
    for _ in range(200):
        rho = random_density_matrix(rng)
        assert witness_expectation(rho) == pytest.approx(witness_fidelity_form(rho), abs=1e-13)


def test_separable_states_never_detected():
    rng = np.random.default_rng(2)
    assert min(witness_expectation(random_separable_state(rng)) for _ in range(2000)) >= 0


def test_concurrence_conditions_and_ppt_agree_on_thermal_grid():
    in_band = 0
    for p in acceptance_grid():
        rho = thermal_density_matrix(p)
        c = concurrence_check(rho)
        assert (separability_conditions(rho) is Separability.ENTANGLED) == (c > 0)
        entangled_c = c > 1e-12
        if (ppt_verdict(rho) is Separability.ENTANGLED) != entangled_c:
            # weak entanglement near a pure product ground state: the PT eigenvalue
            # scales like C^2 and sits inside the PPT tolerance, with the right sign
            lam = min_pt_eigenvalue(rho)
            assert -PPT_TOL <= lam < 0
            in_band += 1
    assert in_band < 0.02 * 1200


def test_detection_implies_ppt_entangled():
    for p in GRID:
        rho = thermal_density_matrix(p)
        if witness_expectation(rho) < 0:
            assert ppt_verdict(rho) is Separability.ENTANGLED


def test_witness_is_incomplete_on_thermal_grid():
    # the singlet witness misses entanglement of phi_3 when theta < pi/4
    missed = [
        p for p in GRID
        if witness_expectation(thermal_density_matrix(p)) >= 0
        and ppt_verdict(thermal_density_matrix(p)) is Separability.ENTANGLED
    ]
    assert missed


def test_singlet_ground_state_report():
    p = SpinParams.from_sum_diff(1.0, 0.0, 1.0, 0.01)
    rep = witness_report(thermal_density_matrix(p), p)
    assert rep.expectation == pytest.approx(-0.5, abs=1e-9)
    assert rep.energy_form == pytest.approx(-0.5, abs=1e-9)
    assert rep.verdict is Detection.ENTANGLED_DETECTED
    assert rep.as_dict()["verdict"] == "EntangledDetected"
    ref = zero_temperature_state(p.with_tau(0))
    assert witness_expectation(ref) == pytest.approx(rep.expectation, abs=1e-12)


def test_report_on_general_state_has_no_x_verdict():
    rho = np.full((4, 4), 0.25)
    rep = witness_report(rho)
    assert rep.x_state_verdict is None and rep.energy_form is None


def test_field_ratio_mapping():
    p = params_from_field_ratio(1.0, -1.0, 0.5)
    assert p.omega_sigma == pytest.approx(0.0) and p.omega_delta == pytest.approx(1.0)
    p = params_from_field_ratio(1.0, 3.0, 0.5)
    assert p.omega1 / p.omega2 == pytest.approx(3.0)
    with pytest.raises(FieldRatioError):
        params_from_field_ratio(1.0, 1.0, 0.5)


def test_boundary_bisection_contract():
    tau = boundary_tau(0.0, -1.0, 0.1, 2.0)
    p = params_from_field_ratio(0.0, -1.0, tau)
    assert abs(witness_expectation(thermal_density_matrix(p))) < 1e-6
    with pytest.raises(ValueError):
        boundary_tau(0.0, -1.0, 1.5, 2.0)


def test_phase_diagram_singular_ratio_cells():
    pd = phase_diagram([0.1, 0.5], [0.0, 1.0], 1.0)
    assert len(pd.singular) == 4 and pd.detected_count() == 0
    assert all(v is Detection.SINGULAR for row in pd.verdicts for v in row)


def test_phase_diagram_threads_are_deterministic():
    taus, ods = np.linspace(0.05, 2, 12), np.linspace(0, 4, 7)
    a = phase_diagram(taus, ods, -2.0, workers=1)
    b = phase_diagram(taus, ods, -2.0, workers=4)
    assert np.array_equal(a.expectation, b.expectation)
    assert a.boundary == b.boundary


def test_phase_diagram_rejects_bad_grid():
    with pytest.raises(ValueError):
        phase_diagram([0.0, 1.0], [0.0], -1.0)
    with pytest.raises(ValueError):
        phase_diagram([], [0.0], -1.0)


def test_singlet_constant_is_normalized():
    assert np.linalg.norm(SINGLET) == pytest.approx(1.0)
    assert math.isclose(witness_expectation(np.outer(SINGLET, SINGLET.conj())), -0.5, abs_tol=1e-15)
