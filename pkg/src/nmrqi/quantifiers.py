"""Entropy and purity based quantifiers of two-qubit density matrices.

Entropies are in bits. The coherence reference basis is the product basis.
"""

from __future__ import annotations

import math

import numpy as np

from .spin_system import SpinParams, derive_params
from .thermal import check_x_structure, is_x_state, log_cosh, state_eigenvalues

ZERO_EIG = 1e-15
NORM_TOL = 1e-10


def _entropy_bits(probs) -> float:
    probs = np.asarray(probs, dtype=float)
    if np.any(probs < -1e-12):
        raise ValueError(f"negative probability {probs.min():.3g}")
    if abs(probs.sum() - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {probs.sum():.12g}, not 1")
    nz = probs[probs > ZERO_EIG]
    return float(max(0.0, -np.sum(nz * np.log2(nz))))


def von_neumann_entropy(eigs) -> float:
    """S = -sum lambda log2 lambda from a spectrum, with 0 log 0 = 0."""
    return _entropy_bits(eigs)


def density_eigenvalues(rho: np.ndarray) -> np.ndarray:
    """Closed-form spectrum for X-shaped states, LAPACK otherwise."""
    if is_x_state(rho):
        return state_eigenvalues(rho)
    return np.linalg.eigvalsh(rho)


def diagonal_entropy(rho: np.ndarray) -> float:
    return _entropy_bits(np.real(np.diag(rho)))


def coherence_relative_entropy(rho: np.ndarray) -> float:
    """R = S(rho_d) - S(rho); zero iff rho is diagonal in the product basis."""
    r = diagonal_entropy(rho) - von_neumann_entropy(density_eigenvalues(rho))
    return max(r, 0.0)


def purity(rho: np.ndarray) -> float:
    return float(np.real(np.sum(np.abs(rho) ** 2)))


def mixedness(rho: np.ndarray) -> float:
    """Rescaled linear entropy (d/(d-1))(1 - Tr rho^2) with d = 4."""
    d = rho.shape[0]
    return d / (d - 1) * (1.0 - purity(rho))


def _mixedness_ratio(beta, j, omega_sigma, d_gap) -> float:
    # numerator / denominator of the closed form, both in log space
    log_num = np.logaddexp(-beta * j + log_cosh(beta * omega_sigma), log_cosh(beta * d_gap))
    log_den = math.log(2.0) + 2 * np.logaddexp(
        -beta * j / 2 + log_cosh(beta * omega_sigma / 2), log_cosh(beta * d_gap / 2)
    )
    return float(np.exp(log_num - log_den))


def mixedness_closed_form(p: SpinParams) -> float:
    """Thermal mixedness straight from (beta, J, omega_sigma, D)."""
    if p.tau <= 0:
        raise ValueError("mixedness_closed_form requires tau > 0")
    d = derive_params(p)
    return 4.0 / 3.0 * (1.0 - _mixedness_ratio(p.beta, p.j_coupling, d.omega_sigma, d.d_gap))


def mixedness_zero_field(p: SpinParams) -> float:
    """Closed form with omega_sigma set to zero (D kept)."""
    if p.tau <= 0:
        raise ValueError("mixedness_zero_field requires tau > 0")
    d = derive_params(p)
    return 4.0 / 3.0 * (1.0 - _mixedness_ratio(p.beta, p.j_coupling, 0.0, d.d_gap))


def mixedness_homonuclear_zero_field(tau: float, j_coupling: float = 1.0) -> float:
    """M = (4/3)[1 - (e^{2bJ} + 3)/(e^{bJ} + 3)^2], written overflow-free.

    Singlet weight 1 against a threefold triplet weight e^{-bJ}. The
    denominator has to be (e^{bJ} + 3)^2 for M -> 1 as tau -> inf.
    """
    if tau <= 0:
        raise ValueError("tau must be > 0")
    x = math.exp(-1.0 / tau)  # e^{-bJ} with bJ = 1/tau
    return 4.0 / 3.0 * (1.0 - (1.0 + 3 * x * x) / (1.0 + 3 * x) ** 2)


def fidelity_with_pure(rho: np.ndarray, psi) -> float:
    """<psi|rho|psi> for a normalized state vector."""
    psi = np.asarray(psi, dtype=complex)
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"state vector is not normalized (norm {norm:.12g})")
    return float(np.real(psi.conj() @ rho @ psi))


def concurrence_check(rho: np.ndarray) -> float:
    """Concurrence of an X-shaped two-qubit state.

    Only a cross-check for the separability tests; pure |phi_3> gives 2|sin cos|.
    """
    check_x_structure(rho)
    r = np.real(np.diag(rho))
    a = abs(rho[1, 2]) - math.sqrt(max(r[0] * r[3], 0.0))
    b = abs(rho[0, 3]) - math.sqrt(max(r[1] * r[2], 0.0))
    return 2.0 * max(0.0, a, b)


def concurrence_pure(psi) -> float:
    """2|ad - bc| for psi = (a, b, c, d) in the product basis."""
    a, b, c, d = np.asarray(psi, dtype=complex)
    return float(2 * abs(a * d - b * c))
