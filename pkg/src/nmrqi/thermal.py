"""Boltzmann thermal state of the two-spin system.

All weights are evaluated relative to the ground energy and the partition
function is carried in log form, so near-zero temperatures never overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spin_system import (
    ParameterError,
    SpinParams,
    derive_params,
    energy_levels,
)

NEAR_ZERO_TAU = 1e-6
DEFAULT_DEGENERACY_TOL = 1e-9
X_STRUCTURE_TOL = 1e-10

# entries that must vanish in an X-shaped 4x4 matrix
_NON_X = [(i, j) for i in range(4) for j in range(4) if i != j and i + j != 3]


class NotXStateError(ValueError):
    """Raised when a matrix lacks the diagonal plus anti-diagonal structure."""


def log_cosh(x: float) -> float:
    x = abs(x)
    return x + math.log1p(math.exp(-2.0 * x)) - math.log(2.0)


def _require_positive_tau(p: SpinParams, what: str):
    if p.tau <= 0:
        raise ParameterError(f"{what} requires tau > 0 (got {p.tau}); use zero_temperature_state")


def log_partition_function(p: SpinParams) -> float:
    """log Z for Z = 2 e^{bJ/4} (e^{-bJ/2} cosh(b ws/2) + cosh(b D/2))."""
    _require_positive_tau(p, "partition_function")
    b = p.beta
    d = derive_params(p)
    j = p.j_coupling
    inner = np.logaddexp(
        -b * j / 2 + log_cosh(b * d.omega_sigma / 2),
        log_cosh(b * d.d_gap / 2),
    )
    return float(math.log(2.0) + b * j / 4 + inner)


def partition_function(p: SpinParams) -> float:
    """Z itself; overflows to inf for extreme beta, where log_partition_function stays finite."""
    with np.errstate(over="ignore"):
        return float(np.exp(log_partition_function(p)))


def populations(p: SpinParams) -> np.ndarray:
    """Boltzmann probabilities p_1..p_4 of the eigenstates phi_1..phi_4."""
    _require_positive_tau(p, "populations")
    e = energy_levels(p).as_array()
    w = np.exp(-p.beta * (e - e.min()))
    return w / w.sum()


def density_from_populations(pops, theta: float) -> np.ndarray:
    """Product-basis matrix of sum_i p_i |phi_i><phi_i| for mixing angle theta."""
    p1, p2, p3, p4 = (float(x) for x in pops)
    c, s = math.cos(theta), math.sin(theta)
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = p1
    rho[1, 1] = p2 * c * c + p3 * s * s
    rho[2, 2] = p2 * s * s + p3 * c * c
    rho[3, 3] = p4
    rho[1, 2] = rho[2, 1] = (p2 - p3) * s * c
    return rho


def thermal_density_matrix(p: SpinParams) -> np.ndarray:
    """Thermal state in the product basis.

    Below ``NEAR_ZERO_TAU`` the exact zero-temperature limit is returned.
    """
    _require_positive_tau(p, "thermal_density_matrix")
    if p.tau < NEAR_ZERO_TAU:
        return zero_temperature_state(p)
    return density_from_populations(populations(p), derive_params(p).theta)


def density_matrix(p: SpinParams, degeneracy_tol: float = DEFAULT_DEGENERACY_TOL) -> np.ndarray:
    """Thermal state for tau > 0, ground-state limit for tau == 0."""
    if p.tau == 0:
        return zero_temperature_state(p, degeneracy_tol)
    return thermal_density_matrix(p)


@dataclass(frozen=True)
class ThermalState:
    params: SpinParams
    populations: np.ndarray
    rho: np.ndarray
    log_z: float


def thermal_state(p: SpinParams, degeneracy_tol: float = DEFAULT_DEGENERACY_TOL) -> ThermalState:
    """Populations, product-basis matrix and log Z (nan at tau == 0)."""
    if p.tau == 0:
        pops = np.zeros(4)
        idx = ground_manifold(p, degeneracy_tol)
        pops[idx] = 1.0 / len(idx)
        return ThermalState(p, pops, zero_temperature_state(p, degeneracy_tol), math.nan)
    return ThermalState(p, populations(p), thermal_density_matrix(p), log_partition_function(p))


def ground_manifold(p: SpinParams, degeneracy_tol: float = DEFAULT_DEGENERACY_TOL) -> list[int]:
    """Zero-based indices of eigenstates within tolerance of the lowest energy."""
    e = energy_levels(p).as_array()
    tol = degeneracy_tol * p.j_coupling
    return [i for i in range(4) if e[i] - e.min() <= tol]


def zero_temperature_state(p: SpinParams, degeneracy_tol: float = DEFAULT_DEGENERACY_TOL) -> np.ndarray:
    """Limit of the thermal state as tau -> 0+.

    An equal mixture of the ground manifold: |phi_3><phi_3| below the E3/E4
    crossing, |phi_4><phi_4| above it and half of each at the crossing.
    """
    idx = ground_manifold(p, degeneracy_tol)
    pops = np.zeros(4)
    pops[idx] = 1.0 / len(idx)
    return density_from_populations(pops, derive_params(p).theta)


def regime(p: SpinParams, degeneracy_tol: float = DEFAULT_DEGENERACY_TOL) -> str:
    """'low', 'crossing' or 'high' from the order of E3 and E4."""
    e = energy_levels(p)
    gap = e.e4 - e.e3
    if abs(gap) <= degeneracy_tol * p.j_coupling:
        return "crossing"
    return "low" if gap > 0 else "high"


def check_x_structure(rho: np.ndarray, tol: float = X_STRUCTURE_TOL):
    worst = max(abs(rho[i, j]) for i, j in _NON_X)
    if worst > tol:
        raise NotXStateError(f"matrix is not X-shaped: off-X element of size {worst:.3g}")


def is_x_state(rho: np.ndarray, tol: float = X_STRUCTURE_TOL) -> bool:
    return max(abs(rho[i, j]) for i, j in _NON_X) <= tol


def state_eigenvalues(rho: np.ndarray) -> np.ndarray:
    """Closed-form eigenvalues (lambda_1..lambda_4) of an X-shaped density matrix.

    The outer block gives lambda_1 >= lambda_2 (rho_44 and rho_11 when
    rho_14 = 0 and rho_11 <= rho_44), the central block lambda_3 >= lambda_4.
    """
    rho = np.asarray(rho)
    check_x_structure(rho)
    r = np.real(np.diag(rho))

    def pair(a, b, off):
        root = math.sqrt((a - b) ** 2 + 4 * abs(off) ** 2)
        return 0.5 * (a + b + root), 0.5 * (a + b - root)

    l1, l2 = pair(r[0], r[3], rho[0, 3])
    l3, l4 = pair(r[1], r[2], rho[1, 2])
    return np.array([l1, l2, l3, l4])
