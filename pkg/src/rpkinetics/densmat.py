"""Dense complex matrix algebra for small spin problems (dims 2 to 16).

Matrices are plain ``numpy.ndarray`` of ``complex128``. Every operation
treats its inputs as immutable and returns a fresh array, so generators can
be composed without aliasing surprises. The Hermitian eigensolver is a
cyclic Jacobi sweep, which converges unconditionally and is plenty accurate
at these dimensions.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionError, NotHermitianError

HERMITICITY_TOL = 1e-10
MAX_EIGEN_DIM = 16
_MAX_JACOBI_SWEEPS = 60


def as_matrix(entries) -> np.ndarray:
    """Coerce input to a square complex matrix, validating its shape."""
    m = np.asarray(entries, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def zeros(dim: int) -> np.ndarray:
    return np.zeros((dim, dim), dtype=complex)


def _require_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")


def trace(m) -> complex:
    """Sum of diagonal entries."""
    return complex(np.trace(as_matrix(m)))


def adjoint(m) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(m).conj().T.copy()


def add(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    _require_same_dim(a, b)
    return a + b


def scale(c: complex, m) -> np.ndarray:
    return complex(c) * as_matrix(m)


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    _require_same_dim(a, b)
    return a @ b


def commutator(a, b) -> np.ndarray:
    """a b - b a."""
    a, b = as_matrix(a), as_matrix(b)
    _require_same_dim(a, b)
    return a @ b - b @ a


def anticommutator(a, b) -> np.ndarray:
    """a b + b a."""
    a, b = as_matrix(a), as_matrix(b)
    _require_same_dim(a, b)
    return a @ b + b @ a


def hermitize(m) -> np.ndarray:
    """Symmetrized (m + m†)/2, used to scrub roundoff drift."""
    m = as_matrix(m)
    return 0.5 * (m + m.conj().T)


def is_hermitian(m, tol: float = HERMITICITY_TOL) -> bool:
    m = as_matrix(m)
    return float(np.max(np.abs(m - m.conj().T))) <= tol


def hermiticity_deviation(m) -> float:
    """Max entrywise |m - m†|."""
    m = as_matrix(m)
    return float(np.max(np.abs(m - m.conj().T)))


def hermitian_eigenvalues(m, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi.

    Each rotation zeroes one off-diagonal pair; sweeps repeat until the
    off-diagonal mass is at roundoff level. Raises ``NotHermitianError``
    if the input deviates from Hermiticity beyond ``tol`` and
    ``DimensionError`` above dimension 16.
    """
    a = as_matrix(m)
    n = a.shape[0]
    if n > MAX_EIGEN_DIM:
        raise DimensionError(f"eigensolver supports dim <= {MAX_EIGEN_DIM}, got {n}")
    dev = hermiticity_deviation(a)
    if dev > tol:
        raise NotHermitianError(f"matrix deviates from Hermiticity by {dev:.3e} > {tol:.3e}")
    a = 0.5 * (a + a.conj().T)
    if n == 1:
        return np.array([a[0, 0].real])

    scale_ = float(np.max(np.abs(a)))
    if scale_ == 0.0:
        return np.zeros(n)
    stop = n * n * np.finfo(float).eps * scale_
    pivot_floor = stop / n

    # scalar arithmetic: at these dimensions per-rotation ndarray churn
    # costs far more than the flops
    work = [[complex(a[i, j]) for j in range(n)] for i in range(n)]
    for _ in range(_MAX_JACOBI_SWEEPS):
        off_sq = 0.0
        for i in range(n):
            row = work[i]
            for j in range(n):
                if i != j:
                    off_sq += row[j].real ** 2 + row[j].imag ** 2
        if math.sqrt(off_sq) <= stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = work[p][q]
                r = abs(apq)
                if r <= pivot_floor:
                    continue
                phase = apq / r
                tau = (work[q][q].real - work[p][p].real) / (2.0 * r)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = -math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                ps = s * phase
                pc = s * phase.conjugate()
                # unitary with U[p,p]=c, U[p,q]=-s*phase, U[q,p]=s*conj(phase), U[q,q]=c
                for k in range(n):
                    akp, akq = work[k][p], work[k][q]
                    work[k][p] = c * akp + pc * akq
                    work[k][q] = -ps * akp + c * akq
                for k in range(n):
                    apk, aqk = work[p][k], work[q][k]
                    work[p][k] = c * apk + ps * aqk
                    work[q][k] = -pc * apk + c * aqk
                work[p][q] = 0.0
                work[q][p] = 0.0
    return np.sort([work[i][i].real for i in range(n)])


def purity(rho) -> float:
    """Trace of rho squared; 1 for pure states, 1/dim for maximal mixing."""
    rho = as_matrix(rho)
    return float(np.trace(rho @ rho).real)


def frobenius_distance(a, b) -> float:
    """Frobenius norm of a - b."""
    a, b = as_matrix(a), as_matrix(b)
    _require_same_dim(a, b)
    return float(np.linalg.norm(a - b))
