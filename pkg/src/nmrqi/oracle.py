"""Brute-force numerics used to cross-check the closed forms.

Nothing here uses the analytic eigensystem: the Hamiltonian is rebuilt from
Pauli Kronecker products and diagonalized with a cyclic Jacobi sweep.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .spin_system import ParameterError, SpinParams

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-13
MAX_SWEEPS = 50
PPT_TOL = 1e-10


class Separability(enum.Enum):
    ENTANGLED = "Entangled"
    SEPARABLE = "Separable"

    def __str__(self):
        return self.value


def expectation(op: np.ndarray, rho: np.ndarray) -> float:
    """Real part of Tr(rho op)."""
    return float(np.real(np.trace(rho @ op)))


def hamiltonian_from_paulis(p: SpinParams) -> np.ndarray:
    zeeman = 0.5 * (p.omega1 * np.kron(SZ, I2) + p.omega2 * np.kron(I2, SZ))
    coupling = 0.25 * p.j_coupling * sum(np.kron(s, s) for s in (SX, SY, SZ))
    return zeeman + coupling


def eig_hermitian(m: np.ndarray, tol: float = JACOBI_TOL):
    """Eigen-decomposition of a small Hermitian matrix by cyclic Jacobi rotations.

    Pairs are visited row-major over the upper triangle. Returns eigenvalues in
    ascending order and the matching orthonormal eigenvectors as columns.
    """
    arr = np.asarray(m, dtype=complex)
    n = arr.shape[0]
    if arr.shape != (n, n):
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if np.max(np.abs(arr - arr.conj().T)) > HERMITIAN_TOL:
        raise ValueError("matrix is not Hermitian")
    # plain Python scalars: numpy call overhead dominates at this size
    a = (0.5 * (arr + arr.conj().T)).tolist()
    v = [[1.0 + 0j if i == k else 0j for k in range(n)] for i in range(n)]
    threshold = tol * max(1.0, float(np.linalg.norm(arr)))
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]

    def off_norm():
        return math.sqrt(2.0 * sum(abs(a[p][q]) ** 2 for p, q in pairs))

    for _ in range(MAX_SWEEPS):
        if off_norm() < threshold:
            break
        for p, q in pairs:
            apq = a[p][q]
            r = abs(apq)
            if r < 1e-300:
                continue
            ph = apq / r
            phc = ph.conjugate()
            x = (a[q][q].real - a[p][p].real) / (2.0 * r)
            t = math.copysign(1.0, x) / (abs(x) + math.sqrt(x * x + 1.0))
            c = 1.0 / math.sqrt(t * t + 1.0)
            s = t * c
            # U = diag(1, conj(ph)) on (p, q) followed by a real rotation; A <- U^H A U
            for row in a:
                ap, aq = row[p], row[q]
                row[p] = c * ap - s * phc * aq
                row[q] = s * ap + c * phc * aq
            rp, rq = a[p], a[q]
            for k in range(n):
                xp, xq = rp[k], rq[k]
                rp[k] = c * xp - s * ph * xq
                rq[k] = s * xp + c * ph * xq
            a[p][q] = a[q][p] = 0j
            a[p][p] = complex(a[p][p].real)
            a[q][q] = complex(a[q][q].real)
            for row in v:
                vp, vq = row[p], row[q]
                row[p] = c * vp - s * phc * vq
                row[q] = s * vp + c * phc * vq
    else:
        if off_norm() >= threshold:
            raise RuntimeError("Jacobi iteration did not converge")

    w = np.array([a[i][i].real for i in range(n)])
    order = np.argsort(w, kind="stable")
    return w[order], np.array(v)[:, order]


def eigvals_hermitian(m: np.ndarray) -> np.ndarray:
    return eig_hermitian(m)[0]


def thermal_numeric(p: SpinParams) -> tuple[np.ndarray, float]:
    """(exp(-beta H)/Z, log Z) from one Jacobi eigendecomposition of H."""
    if p.tau <= 0:
        raise ParameterError("the numerical thermal state requires tau > 0")
    w, v = eig_hermitian(hamiltonian_from_paulis(p))
    shift = w.min()
    weights = np.exp(-p.beta * (w - shift))
    total = weights.sum()
    rho = (v * (weights / total)) @ v.conj().T
    return rho, float(-p.beta * shift + math.log(total))


def thermal_state_numeric(p: SpinParams) -> np.ndarray:
    return thermal_numeric(p)[0]


def log_partition_numeric(p: SpinParams) -> float:
    return thermal_numeric(p)[1]


def partial_transpose(rho: np.ndarray, subsystem: int = 2) -> np.ndarray:
    """Partial transpose of a two-qubit operator on subsystem 1 or 2."""
    if subsystem not in (1, 2):
        raise ValueError("subsystem must be 1 or 2")
    t = np.asarray(rho).reshape(2, 2, 2, 2)
    if subsystem == 1:
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return t.reshape(4, 4)


def min_pt_eigenvalue(rho: np.ndarray) -> float:
    return float(eigvals_hermitian(partial_transpose(rho, 2))[0])


def ppt_verdict(rho: np.ndarray) -> Separability:
    # for 2x2 systems PPT is necessary and sufficient for separability
    if min_pt_eigenvalue(rho) < -PPT_TOL:
        return Separability.ENTANGLED
    return Separability.SEPARABLE
