"""Two coupled spin-1/2 nuclei: parameters, Hamiltonian and analytic eigensystem.

Product basis ordering is fixed as ``|aa>, |ab>, |ba>, |bb>`` with ``a`` the
spin-up (+z) state. Energies and frequencies are angular (hbar = 1) and share
the units of the scalar coupling ``J``; temperature is carried as the rescaled
``tau = k_B T / J``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class ParameterError(ValueError):
    """Raised when physical parameters violate a precondition."""


@dataclass(frozen=True)
class SpinParams:
    omega1: float
    omega2: float
    j_coupling: float = 1.0
    tau: float = 1.0

    def __post_init__(self):
        for name in ("omega1", "omega2", "j_coupling", "tau"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value!r}")
        if self.j_coupling <= 0:
            raise ParameterError(
                f"j_coupling must be > 0 (J sets the energy scale), got {self.j_coupling}"
            )
        if self.tau < 0:
            raise ParameterError(f"tau must be >= 0, got {self.tau}")

    @classmethod
    def from_sum_diff(cls, omega_sigma, omega_delta, j_coupling=1.0, tau=1.0):
        """Build from the Larmor sum and difference."""
        return cls(
            omega1=0.5 * (omega_sigma + omega_delta),
            omega2=0.5 * (omega_sigma - omega_delta),
            j_coupling=j_coupling,
            tau=tau,
        )

    @property
    def omega_sigma(self) -> float:
        return self.omega1 + self.omega2

    @property
    def omega_delta(self) -> float:
        return self.omega1 - self.omega2

    @property
    def beta(self) -> float:
        """Inverse temperature 1/(k_B T) in units of 1/J-energy; inf at tau = 0."""
        if self.tau == 0:
            return math.inf
        return 1.0 / (self.tau * self.j_coupling)

    def normalized(self) -> "SpinParams":
        """Same system expressed in units where J = 1."""
        j = self.j_coupling
        return SpinParams(self.omega1 / j, self.omega2 / j, 1.0, self.tau)

    def with_tau(self, tau: float) -> "SpinParams":
        return SpinParams(self.omega1, self.omega2, self.j_coupling, tau)


@dataclass(frozen=True)
class DerivedParams:
    omega_sigma: float
    omega_delta: float
    d_gap: float
    theta: float

    @property
    def sin2theta(self) -> float:
        return math.sin(2 * self.theta)

    @property
    def cos2theta(self) -> float:
        return math.cos(2 * self.theta)


@dataclass(frozen=True)
class EnergyLevels:
    e1: float
    e2: float
    e3: float
    e4: float

    def as_array(self) -> np.ndarray:
        return np.array([self.e1, self.e2, self.e3, self.e4])


def mixing_angle(j_coupling: float, omega_delta: float) -> float:
    """Mixing angle with sin(2 theta) = J/D and cos(2 theta) = omega_delta/D.

    For omega_delta >= 0 this lies in (0, pi/4]; a negative difference gives
    pi/2 - theta of the label-swapped system.
    """
    return 0.5 * math.atan2(j_coupling, omega_delta)


def derive_params(p: SpinParams) -> DerivedParams:
    if p.j_coupling <= 0:
        raise ParameterError("j_coupling must be > 0")
    od = p.omega_delta
    d_gap = math.hypot(od, p.j_coupling)
    return DerivedParams(p.omega_sigma, od, d_gap, mixing_angle(p.j_coupling, od))


def energy_levels(p: SpinParams) -> EnergyLevels:
    d = derive_params(p)
    j = p.j_coupling
    return EnergyLevels(
        e1=0.5 * (d.omega_sigma + 0.5 * j),
        e2=0.5 * (d.d_gap - 0.5 * j),
        e3=-0.5 * (d.d_gap + 0.5 * j),
        e4=0.5 * (-d.omega_sigma + 0.5 * j),
    )


def eigenbasis_from_theta(theta: float) -> np.ndarray:
    """Columns are phi_1..phi_4 in the product basis."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, c, -s, 0.0],
            [0.0, s, c, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )


def eigenbasis(p: SpinParams) -> np.ndarray:
    return eigenbasis_from_theta(derive_params(p).theta)


def zeeman_matrix(p: SpinParams) -> np.ndarray:
    ws, wd = p.omega_sigma, p.omega_delta
    return np.diag([ws, wd, -wd, -ws]).astype(complex) / 2


def coupling_matrix(p: SpinParams) -> np.ndarray:
    """Scalar coupling J I1.I2 in the product basis."""
    j = p.j_coupling
    h = np.diag([j / 4, -j / 4, -j / 4, j / 4]).astype(complex)
    h[1, 2] = h[2, 1] = j / 2
    return h


def hamiltonian_matrix(p: SpinParams) -> np.ndarray:
    return zeeman_matrix(p) + coupling_matrix(p)


def crossing_coupling(omega_sigma: float, omega_delta: float) -> float:
    """Coupling J at which E3 and E4 cross for the given Larmor sum/difference."""
    if omega_sigma <= 0:
        raise ParameterError("crossing requires omega_sigma > 0")
    return (omega_sigma**2 - omega_delta**2) / (2 * omega_sigma)


def critical_omega_sigma(j_coupling: float, omega_delta: float) -> float:
    """Positive root of omega_sigma^2 - 2 J omega_sigma - omega_delta^2 = 0, i.e. J + D."""
    if j_coupling <= 0:
        raise ParameterError("j_coupling must be > 0")
    return j_coupling + math.hypot(j_coupling, omega_delta)
