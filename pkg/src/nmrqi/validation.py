"""Self-checks comparing closed forms against the brute-force oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import oracle
from .quantifiers import (
    coherence_relative_entropy,
    concurrence_check,
    mixedness,
    mixedness_closed_form,
)
from .reconstruction import (
    DegenerateAngleError,
    forward_observables,
    mixedness_from_observables,
    mixedness_from_populations,
    reconstruct_populations,
)
from .spin_system import SpinParams, critical_omega_sigma, derive_params, eigenbasis
from .thermal import (
    log_partition_function,
    populations,
    state_eigenvalues,
    thermal_density_matrix,
    zero_temperature_state,
)
from .witness import (
    SINGLET,
    energy_witness_expectation,
    pauli_correlators,
    witness_expectation,
    witness_fidelity_form,
)

GRID_TAUS = np.linspace(0.05, 5.0, 20)
GRID_OMEGA_SIGMAS = np.linspace(0.0, 6.0, 20)
GRID_OMEGA_DELTAS = (0.0, 1.0, 2.5)
DEFAULT_SEED = 20251016


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.value:.3e} (tol {self.tolerance:.0e}) {self.detail}".rstrip()


def acceptance_grid():
    for od in GRID_OMEGA_DELTAS:
        for tau in GRID_TAUS:
            for ws in GRID_OMEGA_SIGMAS:
                yield SpinParams.from_sum_diff(float(ws), od, 1.0, float(tau))


def haar_state(rng, dim: int = 4) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density_matrix(rng, rank: int | None = None) -> np.ndarray:
    """Dirichlet-weighted mixture of Haar-random pure states."""
    rank = rank or int(rng.integers(1, 5))
    weights = rng.dirichlet(np.ones(rank))
    rho = np.zeros((4, 4), dtype=complex)
    for w in weights:
        psi = haar_state(rng)
        rho += w * np.outer(psi, psi.conj())
    return rho


def random_separable_state(rng, terms: int = 4) -> np.ndarray:
    weights = rng.dirichlet(np.ones(terms))
    rho = np.zeros((4, 4), dtype=complex)
    for w in weights:
        psi = np.kron(haar_state(rng, 2), haar_state(rng, 2))
        rho += w * np.outer(psi, psi.conj())
    return rho


def random_x_state(rng) -> np.ndarray:
    """Random valid X-shaped state (positive outer and central blocks)."""
    d = rng.dirichlet(np.ones(4))
    rho = np.diag(d).astype(complex)
    for (i, j) in ((0, 3), (1, 2)):
        bound = math.sqrt(d[i] * d[j])
        rho[i, j] = rng.uniform(0, bound) * np.exp(1j * rng.uniform(0, 2 * math.pi))
        rho[j, i] = rho[i, j].conjugate()
    return rho


def oracle_grid_errors() -> dict:
    """Max-abs deviations of the closed forms from the oracle over the acceptance grid."""
    err = {"rho": 0.0, "log_z": 0.0, "eigenvalues": 0.0, "mixedness": 0.0}
    for p in acceptance_grid():
        rho = thermal_density_matrix(p)
        ref, ref_log_z = oracle.thermal_numeric(p)
        err["rho"] = max(err["rho"], float(np.abs(rho - ref).max()))
        err["log_z"] = max(err["log_z"], abs(log_partition_function(p) - ref_log_z))
        ref_eigs = oracle.eigvals_hermitian(ref)
        err["eigenvalues"] = max(err["eigenvalues"], float(np.abs(np.sort(state_eigenvalues(rho)) - ref_eigs).max()))
        err["mixedness"] = max(err["mixedness"], abs(mixedness_closed_form(p) - mixedness(ref)))
    return err


def witness_form_errors(n: int = 1000, seed: int = DEFAULT_SEED) -> tuple[float, float]:
    """(max disagreement among the three witness forms, min <W> over separable states)."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        rho = random_density_matrix(rng)
        p = SpinParams(rng.normal(scale=3), rng.normal(scale=3), rng.uniform(0.1, 3), 1.0)
        pauli = witness_expectation(rho)
        fid = witness_fidelity_form(rho)
        energy = energy_witness_expectation(rho, p)
        worst = max(worst, abs(pauli - fid), abs(pauli - energy))
    min_sep = min(witness_expectation(random_separable_state(rng)) for _ in range(n))
    return worst, min_sep


def roundtrip_error(n: int = 1000, theta: float = math.pi / 8, seed: int = DEFAULT_SEED) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        pops = rng.dirichlet(np.ones(4))
        back = reconstruct_populations(forward_observables(pops, theta), theta)
        worst = max(worst, float(np.abs(back - pops).max()))
    return worst


def observable_mixedness_offsets() -> dict:
    """Compare the observable-based mixedness with the purity-based value on thermal states.

    Returns max |M_obs - (4/3)(1 - sum p^2)| and max |M_obs - M(rho)|, plus the
    offset against the unnormalized linear entropy 1 - Tr rho^2.
    """
    out = {"vs_populations": 0.0, "vs_state": 0.0, "vs_linear_entropy": 0.0}
    for p in acceptance_grid():
        theta = derive_params(p).theta
        if abs(math.cos(2 * theta)) < 1e-6:
            continue
        pops = populations(p)
        obs = forward_observables(pops, theta)
        m_obs = mixedness_from_observables(obs, theta)
        rho = thermal_density_matrix(p)
        out["vs_populations"] = max(out["vs_populations"], abs(m_obs - mixedness_from_populations(pops)))
        out["vs_state"] = max(out["vs_state"], abs(m_obs - mixedness(rho)))
        lin = 1.0 - float(np.real(np.trace(rho @ rho)))
        out["vs_linear_entropy"] = max(out["vs_linear_entropy"], abs(m_obs - lin))
    return out


def run_validation(seed: int = DEFAULT_SEED) -> list[CheckResult]:
    results = []

    err = oracle_grid_errors()
    for key, label in (("rho", "thermal rho vs oracle"), ("log_z", "log Z vs oracle"),
                       ("eigenvalues", "state eigenvalues vs oracle"), ("mixedness", "closed-form M vs oracle")):
        results.append(CheckResult(label, err[key], 1e-9, err[key] < 1e-9, "20x20x3 grid"))

    worst, min_sep = witness_form_errors(seed=seed)
    results.append(CheckResult("witness fidelity/Pauli/energy forms", worst, 1e-12, worst < 1e-12, "1000 random states"))
    results.append(CheckResult("witness soundness (min <W> on separable states)", min_sep, 0.0, min_sep >= 0.0))

    rt = roundtrip_error(seed=seed)
    results.append(CheckResult("reconstruction round trip theta=pi/8", rt, 1e-12, rt < 1e-12))
    try:
        reconstruct_populations(forward_observables([0.25] * 4, math.pi / 4), math.pi / 4)
        raised = False
    except DegenerateAngleError:
        raised = True
    results.append(CheckResult("reconstruction rejects theta=pi/4", 0.0 if raised else 1.0, 0.0, raised))

    hot = SpinParams.from_sum_diff(1.0, 0.0, 1.0, 1e9)
    rho_hot = thermal_density_matrix(hot)
    results.append(CheckResult("tau->inf mixedness -> 1", abs(1 - mixedness(rho_hot)), 1e-9, abs(1 - mixedness(rho_hot)) < 1e-9))
    r_hot = coherence_relative_entropy(rho_hot)
    results.append(CheckResult("tau->inf coherence -> 0", r_hot, 1e-9, r_hot < 1e-9))

    p_ref = SpinParams.from_sum_diff(1.0, 1.0, 1.0, 1.0)
    v = eigenbasis(p_ref)
    pure_m = max(mixedness(np.outer(v[:, k], v[:, k])) for k in range(4))
    results.append(CheckResult("pure eigenstates have M = 0", abs(pure_m), 1e-9, abs(pure_m) < 1e-9))
    singlet = np.outer(SINGLET, SINGLET.conj())
    w_err = abs(witness_expectation(singlet) + 0.5)
    c_err = float(np.abs(np.array(pauli_correlators(singlet)) + 1).max())
    conc_err = abs(concurrence_check(singlet) - 1)
    results.append(CheckResult("singlet <W> = -1/2", w_err, 1e-9, w_err < 1e-9))
    results.append(CheckResult("singlet correlators = (-1,-1,-1)", c_err, 1e-9, c_err < 1e-9))
    results.append(CheckResult("singlet concurrence = 1", conc_err, 1e-9, conc_err < 1e-9))

    cross_errs = []
    for od in GRID_OMEGA_DELTAS:
        p = SpinParams.from_sum_diff(critical_omega_sigma(1.0, od), od, 1.0, 0.0)
        cross_errs.append(abs(mixedness(zero_temperature_state(p)) - 2 / 3))
    results.append(CheckResult("M at analytic crossing = 2/3", max(cross_errs), 1e-9, max(cross_errs) < 1e-9))

    d = observable_mixedness_offsets()
    results.append(CheckResult(
        "observable mixedness vs (4/3)(1 - sum p^2) [informational]", d["vs_populations"], math.inf, True,
        f"vs M(rho): {d['vs_state']:.3e}; vs 1 - Tr rho^2: {d['vs_linear_entropy']:.3e}",
    ))
    return results
