"""Populations and mixedness from the three longitudinal NMR observables.

The observables are the two Zeeman polarizations and the zz two-spin order.
They only see eigenbasis populations, so any coherence between phi_2 and
phi_3 leaves them unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .oracle import I2, SZ, expectation

EPSILON_THETA = 1e-6
POPULATION_TOL = 1e-9

SZ1 = np.kron(SZ, I2)
SZ2 = np.kron(I2, SZ)
SZZ = np.kron(SZ, SZ)


class DegenerateAngleError(ValueError):
    """cos 2theta too close to zero: p2 and p3 cannot be separated."""


class InconsistentObservablesError(ValueError):
    """Observables that map to populations outside [0, 1]."""


@dataclass(frozen=True)
class NmrObservables:
    p1z: float
    p2z: float
    p1z2z: float

    def __post_init__(self):
        for name in ("p1z", "p2z", "p1z2z"):
            value = getattr(self, name)
            if not (math.isfinite(value) and -1.0 - 1e-12 <= value <= 1.0 + 1e-12):
                raise InconsistentObservablesError(f"{name} = {value!r} is outside [-1, 1]")


def observables_from_state(rho: np.ndarray) -> NmrObservables:
    """Direct traces Tr(sigma_1z rho), Tr(sigma_2z rho), Tr(sigma_1z sigma_2z rho)."""
    return NmrObservables(expectation(SZ1, rho), expectation(SZ2, rho), expectation(SZZ, rho))


def forward_observables(pops, theta: float) -> NmrObservables:
    p1, p2, p3, p4 = (float(x) for x in pops)
    c = math.cos(2 * theta)
    return NmrObservables(
        p1z=p1 - p4 + (p2 - p3) * c,
        p2z=p1 - p4 + (p3 - p2) * c,
        p1z2z=p1 + p4 - (p2 + p3),
    )


def _cos2theta(theta: float, epsilon: float) -> float:
    c = math.cos(2 * theta)
    if abs(c) <= epsilon:
        raise DegenerateAngleError(
            f"|cos 2theta| = {abs(c):.3g} <= {epsilon:g}; p2 and p3 are not identifiable"
        )
    return c


def condition_number(theta: float) -> float:
    """Error amplification 1/|cos 2theta| of the p2/p3 split."""
    c = abs(math.cos(2 * theta))
    return math.inf if c == 0 else 1.0 / c


def reconstruct_populations(
    obs: NmrObservables,
    theta: float,
    epsilon_theta: float = EPSILON_THETA,
    tol: float = POPULATION_TOL,
) -> np.ndarray:
    c = _cos2theta(theta, epsilon_theta)
    a, b, zz = obs.p1z, obs.p2z, obs.p1z2z
    pops = 0.25 * np.array(
        [
            1 + a + b + zz,
            1 - zz + (a - b) / c,
            1 - zz + (b - a) / c,
            1 - a - b + zz,
        ]
    )
    if np.any(pops < -tol) or np.any(pops > 1 + tol):
        raise InconsistentObservablesError(
            f"reconstructed populations {np.round(pops, 12).tolist()} leave [0, 1] by more than {tol:g}"
        )
    pops = np.clip(pops, 0.0, 1.0)
    return pops / pops.sum()


def mixedness_from_observables(obs: NmrObservables, theta: float, epsilon_theta: float = EPSILON_THETA) -> float:
    """M = 1 - [2 zz^2 + (P1 + P2)^2 + (P1 - P2)^2 / cos^2 2theta] / 6 from the three observables."""
    c = _cos2theta(theta, epsilon_theta)
    a, b, zz = obs.p1z, obs.p2z, obs.p1z2z
    return 1.0 - (2 * zz**2 + (a + b) ** 2 + (a - b) ** 2 / c**2) / 6.0


def mixedness_from_populations(pops) -> float:
    """(4/3)(1 - sum p_i^2): the d/(d-1) normalized mixedness of a state diagonal in the eigenbasis."""
    pops = np.asarray(pops, dtype=float)
    return 4.0 / 3.0 * (1.0 - float(np.sum(pops**2)))


@dataclass(frozen=True)
class Reconstruction:
    populations: np.ndarray
    m_observables: float
    m_populations: float
    linear_entropy: float
    condition_number: float


def reconstruct(obs: NmrObservables, theta: float, epsilon_theta: float = EPSILON_THETA, tol: float = POPULATION_TOL) -> Reconstruction:
    pops = reconstruct_populations(obs, theta, epsilon_theta, tol)
    return Reconstruction(
        populations=pops,
        m_observables=mixedness_from_observables(obs, theta, epsilon_theta),
        m_populations=mixedness_from_populations(pops),
        linear_entropy=1.0 - float(np.sum(pops**2)),
        condition_number=condition_number(theta),
    )
