"""Singlet entanglement witness, separability conditions and phase diagrams."""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .oracle import SX, SY, SZ, Separability, expectation, ppt_verdict
from .quantifiers import fidelity_with_pure
from .spin_system import SpinParams, hamiltonian_matrix, zeeman_matrix
from .thermal import check_x_structure, thermal_density_matrix

SINGLET = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / math.sqrt(2.0)
PAULI_PAIRS = tuple(np.kron(s, s) for s in (SX, SY, SZ))
# well inside the 1e-6 tau contract so |<W>| at the root is also tiny
BOUNDARY_TAU_TOL = 1e-12


class Detection(enum.Enum):
    ENTANGLED_DETECTED = "EntangledDetected"
    NOT_DETECTED = "NotDetected"
    SINGULAR = "Singular"

    def __str__(self):
        return self.value


class FieldRatioError(ValueError):
    """Raised when the field ratio cannot produce the requested Larmor difference."""


def singlet_projector() -> np.ndarray:
    return np.outer(SINGLET, SINGLET.conj())


def witness_operator() -> np.ndarray:
    return 0.5 * np.eye(4, dtype=complex) - singlet_projector()


def pauli_correlators(rho: np.ndarray) -> tuple[float, float, float]:
    """(Cxx, Cyy, Czz) with C_aa = Tr(rho sigma_a x sigma_a)."""
    return tuple(expectation(op, rho) for op in PAULI_PAIRS)


def witness_expectation(rho: np.ndarray) -> float:
    """<W> = (1 + Cxx + Cyy + Czz)/4; negative values certify entanglement."""
    return 0.25 * (1.0 + sum(pauli_correlators(rho)))


def witness_fidelity_form(rho: np.ndarray) -> float:
    return 0.5 - fidelity_with_pure(rho, SINGLET)


def energy_witness_expectation(rho: np.ndarray, p: SpinParams) -> float:
    """1/4 + (<H> - <H_Z>)/J; identical to the Pauli form since H - H_Z = J I1.I2."""
    h = expectation(hamiltonian_matrix(p), rho)
    hz = expectation(zeeman_matrix(p), rho)
    return 0.25 + (h - hz) / p.j_coupling


def detection(value: float) -> Detection:
    # the boundary <W> = 0 is not a detection
    return Detection.ENTANGLED_DETECTED if value < 0 else Detection.NOT_DETECTED


def separability_conditions(rho: np.ndarray) -> Separability:
    """X-state criterion: entangled iff rho11 rho44 < |rho23|^2 or rho22 rho33 < |rho14|^2."""
    check_x_structure(rho)
    r = np.real(np.diag(rho))
    if r[0] * r[3] < abs(rho[1, 2]) ** 2 or r[1] * r[2] < abs(rho[0, 3]) ** 2:
        return Separability.ENTANGLED
    return Separability.SEPARABLE


def on_separability_boundary(rho: np.ndarray, tol: float = 1e-12) -> bool:
    r = np.real(np.diag(rho))
    return bool(
        abs(r[0] * r[3] - abs(rho[1, 2]) ** 2) <= tol
        or abs(r[1] * r[2] - abs(rho[0, 3]) ** 2) <= tol
    )


@dataclass(frozen=True)
class WitnessReport:
    expectation: float
    fidelity: float
    correlators: tuple[float, float, float]
    energy_form: float | None
    verdict: Detection
    ppt_verdict: Separability
    x_state_verdict: Separability | None = None
    on_boundary: bool = False

    def as_dict(self) -> dict:
        return {
            "expectation": self.expectation,
            "fidelity": self.fidelity,
            "cxx": self.correlators[0],
            "cyy": self.correlators[1],
            "czz": self.correlators[2],
            "energy_form": self.energy_form,
            "verdict": str(self.verdict),
            "ppt_verdict": str(self.ppt_verdict),
            "x_state_verdict": None if self.x_state_verdict is None else str(self.x_state_verdict),
            "on_boundary": self.on_boundary,
        }


def witness_report(rho: np.ndarray, p: SpinParams | None = None) -> WitnessReport:
    value = witness_expectation(rho)
    try:
        x_verdict = separability_conditions(rho)
        boundary = on_separability_boundary(rho)
    except ValueError:
        x_verdict, boundary = None, False
    return WitnessReport(
        expectation=value,
        fidelity=fidelity_with_pure(rho, SINGLET),
        correlators=pauli_correlators(rho),
        energy_form=None if p is None else energy_witness_expectation(rho, p),
        verdict=detection(value),
        ppt_verdict=ppt_verdict(rho),
        x_state_verdict=x_verdict,
        on_boundary=boundary,
    )


def params_from_field_ratio(omega_delta: float, r: float, tau: float, j_coupling: float = 1.0) -> SpinParams:
    """Larmor frequencies for signed ratio r = omega1/omega2 at a given difference.

    omega2 = omega_delta/(r - 1), omega1 = r omega2. r = 1 is singular.
    """
    if r == 1:
        raise FieldRatioError("field ratio r = 1 fixes omega_delta = 0 and leaves omega_sigma undetermined")
    omega2 = omega_delta / (r - 1)
    return SpinParams(r * omega2, omega2, j_coupling, tau)


def _witness_at(omega_delta, r, tau, j_coupling) -> float:
    p = params_from_field_ratio(omega_delta, r, tau, j_coupling)
    return witness_expectation(thermal_density_matrix(p))


def boundary_tau(omega_delta, r, tau_lo, tau_hi, j_coupling=1.0, tol=BOUNDARY_TAU_TOL) -> float:
    """Bisect <W>(tau) = 0 on a bracketing interval."""
    w_lo = _witness_at(omega_delta, r, tau_lo, j_coupling)
    w_hi = _witness_at(omega_delta, r, tau_hi, j_coupling)
    if (w_lo < 0) == (w_hi < 0):
        raise ValueError("interval does not bracket a sign change")
    while tau_hi - tau_lo > tol:
        mid = 0.5 * (tau_lo + tau_hi)
        w_mid = _witness_at(omega_delta, r, mid, j_coupling)
        if w_mid == 0:
            return mid
        if (w_mid < 0) == (w_lo < 0):
            tau_lo, w_lo = mid, w_mid
        else:
            tau_hi = mid
    return 0.5 * (tau_lo + tau_hi)


@dataclass
class PhaseDiagram:
    """Witness sign on a (omega_delta, tau) grid; rows index omega_delta."""

    r: float
    taus: np.ndarray
    omega_deltas: np.ndarray
    expectation: np.ndarray
    verdicts: list
    ppt_verdicts: list
    boundary: list  # (tau, omega_delta, <W>) triples
    singular: list  # (tau, omega_delta) pairs that hit r = 1

    def detected_count(self) -> int:
        return sum(v is Detection.ENTANGLED_DETECTED for row in self.verdicts for v in row)

    def rows(self):
        for i, od in enumerate(self.omega_deltas):
            for k, tau in enumerate(self.taus):
                yield tau, od, self.expectation[i, k], self.verdicts[i][k], self.ppt_verdicts[i][k]


def _cell(args):
    omega_delta, r, tau, j_coupling = args
    try:
        p = params_from_field_ratio(omega_delta, r, tau, j_coupling)
    except FieldRatioError:
        return math.nan, Detection.SINGULAR, None
    rho = thermal_density_matrix(p)
    value = witness_expectation(rho)
    return value, detection(value), ppt_verdict(rho)


def phase_diagram(taus, omega_deltas, r: float, j_coupling: float = 1.0, workers: int = 1) -> PhaseDiagram:
    taus = np.asarray(taus, dtype=float)
    omega_deltas = np.asarray(omega_deltas, dtype=float)
    if taus.size == 0 or omega_deltas.size == 0:
        raise ValueError("phase diagram grid is empty")
    if np.any(taus <= 0):
        raise ValueError("phase diagram temperatures must be > 0")
    jobs = [(od, r, t, j_coupling) for od in omega_deltas for t in taus]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(_cell, jobs))
    else:
        cells = [_cell(job) for job in jobs]

    n_d, n_t = omega_deltas.size, taus.size
    values = np.array([c[0] for c in cells]).reshape(n_d, n_t)
    verdicts = [[cells[i * n_t + k][1] for k in range(n_t)] for i in range(n_d)]
    ppt = [[cells[i * n_t + k][2] for k in range(n_t)] for i in range(n_d)]
    singular = [(job[2], job[0]) for job, c in zip(jobs, cells) if c[1] is Detection.SINGULAR]

    boundary = []
    for i, od in enumerate(omega_deltas):
        row = values[i]
        for k in range(n_t - 1):
            a, b = row[k], row[k + 1]
            if math.isnan(a) or math.isnan(b) or (a < 0) == (b < 0):
                continue
            tau_star = boundary_tau(od, r, taus[k], taus[k + 1], j_coupling)
            boundary.append((tau_star, float(od), _witness_at(od, r, tau_star, j_coupling)))
    return PhaseDiagram(r, taus, omega_deltas, values, verdicts, ppt, boundary, singular)
