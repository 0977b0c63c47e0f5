"""Right-hand-side generators d(rho)/dt for the recombination models.

Three model kinds are supported, all with singlet-only recombination at
rate k_S (the triplet channel is frozen at zero):

* ``QUANTUM_MEASUREMENT`` treats recombination as a continuous measurement
  of the pair. In the pair (ST) space the generator is

      d(rho)/dt = -k_S (rho - Q_T rho Q_T)

  which damps the singlet population and the full S-T coherence at k_S and
  bleeds trace out of the pair space.

* ``HABERKORN`` is the conventional anticommutator form

      d(rho)/dt = -(k_S / 2) {Q_S, rho}

  damping the singlet population at k_S but the coherence only at k_S / 2.

* ``NORMALIZED_QM`` evolves the unit-trace state of the surviving pairs.
  Dividing the measurement-model state by its trace yields a nonlinear
  equation; it is implemented in the division-free form

      d(rho)/dt = -k_S (Tr[Q_T rho Q_T] rho - Q_T rho Q_T)

  which agrees with the quotient wherever the triplet weight is nonzero
  and stays regular at the pure-singlet point where the quotient is 0/0.

In the expanded (PST) space the first two models gain a product-level
source d(rho_PP)/dt = +k_S rho_SS, making the generator trace preserving.
A coherent term -i[H, rho] can be attached through ``RateParams``; it is
an experimental hook and every validated result here runs at H = 0.

Derivatives are plain arrays, not ``DensityMatrix`` values: a derivative
is generally neither positive nor trace-bounded.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import densmat
from .errors import (
    BasisError,
    DimensionError,
    DomainError,
    ImproperStateError,
    NotHermitianError,
    UnsupportedModelError,
)
from .spinsys import BasisKind, DensityMatrix, Projectors

UNIT_TRACE_TOL = 1e-9


class ModelKind(enum.Enum):
    """Which recombination model generates the dynamics."""

    QUANTUM_MEASUREMENT = "qm"
    HABERKORN = "hk"
    NORMALIZED_QM = "nqm"


@dataclass(frozen=True, eq=False)
class RateParams:
    """Reaction rates plus the optional coherent hook.

    ``k_t`` is carried for interface completeness but pinned to zero; the
    closed forms and decompositions in this package are specific to a
    frozen triplet channel, so a nonzero value is rejected rather than
    silently accepted.
    """

    k_s: float
    k_t: float = 0.0
    hamiltonian: np.ndarray | None = None

    def __post_init__(self):
        if not (self.k_s >= 0.0):
            raise DomainError(f"k_s must be nonnegative, got {self.k_s!r}")
        if self.k_t != 0.0:
            raise DomainError("k_t is pinned to zero; triplet recombination is not modeled")
        if self.hamiltonian is not None:
            h = densmat.as_matrix(self.hamiltonian)
            dev = densmat.hermiticity_deviation(h)
            if dev > densmat.HERMITICITY_TOL:
                raise NotHermitianError(f"hamiltonian deviates from Hermiticity by {dev:.3e}")
            h = 0.5 * (h + h.conj().T)
            h.flags.writeable = False
            object.__setattr__(self, "hamiltonian", h)


def _coherent_term(h: np.ndarray, mat: np.ndarray) -> np.ndarray:
    if h.shape != mat.shape:
        raise DimensionError(f"hamiltonian shape {h.shape} does not match state {mat.shape}")
    return -1j * (h @ mat - mat @ h)


def _qm_raw(mat: np.ndarray, k_s: float, qt: np.ndarray, h: np.ndarray | None) -> np.ndarray:
    deriv = -k_s * (mat - qt @ mat @ qt)
    if h is not None:
        deriv += _coherent_term(h, mat)
    return deriv


def _haberkorn_raw(mat: np.ndarray, k_s: float, qs: np.ndarray, h: np.ndarray | None) -> np.ndarray:
    deriv = -0.5 * k_s * (qs @ mat + mat @ qs)
    if h is not None:
        deriv += _coherent_term(h, mat)
    return deriv


def _normalized_raw(mat: np.ndarray, k_s: float, qt: np.ndarray, h: np.ndarray | None) -> np.ndarray:
    projected = qt @ mat @ qt
    deriv = -k_s * (np.trace(projected) * mat - projected)
    if h is not None:
        deriv += _coherent_term(h, mat)
    return deriv


def _expanded_raw(
    mat: np.ndarray,
    k_s: float,
    st_raw: Callable[[np.ndarray], np.ndarray],
    h: np.ndarray | None,
) -> np.ndarray:
    deriv = np.zeros_like(mat)
    deriv[1:, 1:] = st_raw(mat[1:, 1:])
    deriv[0, 0] = k_s * mat[1, 1]
    if h is not None:
        deriv += _coherent_term(h, mat)
    return deriv


def _require_basis(rho: DensityMatrix, proj: Projectors, kind: BasisKind, who: str) -> None:
    if rho.basis.kind is not kind:
        raise BasisError(f"{who} expects a {kind.value.upper()} state, got {rho.basis.kind.value.upper()}")
    if proj.basis.kind is not kind:
        raise BasisError(f"{who} got projectors in basis {proj.basis.kind.value.upper()}")


def qm_rhs(rho: DensityMatrix, params: RateParams, proj: Projectors) -> np.ndarray:
    """Measurement-model derivative -k_S (rho - Q_T rho Q_T) in the pair space."""
    _require_basis(rho, proj, BasisKind.ST, "qm_rhs")
    return _qm_raw(rho.mat, params.k_s, proj.qt, params.hamiltonian)


def haberkorn_rhs(rho: DensityMatrix, params: RateParams, proj: Projectors) -> np.ndarray:
    """Anticommutator derivative -(k_S/2) {Q_S, rho} in the pair space."""
    _require_basis(rho, proj, BasisKind.ST, "haberkorn_rhs")
    return _haberkorn_raw(rho.mat, params.k_s, proj.qs, params.hamiltonian)


def normalized_rhs(rho: DensityMatrix, params: RateParams, proj: Projectors) -> np.ndarray:
    """Division-free derivative of the unit-trace surviving-pair state.

    Requires a proper state: the evolved object is a renormalized density
    matrix, so a trace away from one is a usage error.
    """
    _require_basis(rho, proj, BasisKind.ST, "normalized_rhs")
    tr = rho.trace
    if abs(tr - 1.0) > UNIT_TRACE_TOL:
        raise ImproperStateError(f"normalized_rhs needs trace 1, got {tr!r}")
    return _normalized_raw(rho.mat, params.k_s, proj.qt, params.hamiltonian)


def expanded_rhs(
    kind: ModelKind, rho: DensityMatrix, params: RateParams, proj: Projectors
) -> np.ndarray:
    """Trace-preserving derivative in the expanded (P, S, T) space.

    The pair block evolves under the chosen model and the product
    population gains +k_S rho_SS, so the total derivative is traceless.
    """
    if kind is ModelKind.NORMALIZED_QM:
        raise UnsupportedModelError("the normalized model is defined on the pair space only")
    _require_basis(rho, proj, BasisKind.PST, "expanded_rhs")
    return rhs_function(kind, params, proj)(rho.mat)


def rhs_function(
    kind: ModelKind, params: RateParams, proj: Projectors
) -> Callable[[np.ndarray], np.ndarray]:
    """Raw-array derivative closure for the integrator.

    Basis compatibility is resolved once, here; the returned closure does
    no validation so it can run inside inner integration stages.
    """
    h = params.hamiltonian
    if h is not None and h.shape[0] != proj.basis.dim:
        raise DimensionError(
            f"hamiltonian dim {h.shape[0]} does not match basis {proj.basis.labels}"
        )
    if proj.basis.kind is BasisKind.ST:
        if kind is ModelKind.QUANTUM_MEASUREMENT:
            return lambda mat: _qm_raw(mat, params.k_s, proj.qt, h)
        if kind is ModelKind.HABERKORN:
            return lambda mat: _haberkorn_raw(mat, params.k_s, proj.qs, h)
        return lambda mat: _normalized_raw(mat, params.k_s, proj.qt, h)
    if kind is ModelKind.NORMALIZED_QM:
        raise UnsupportedModelError("the normalized model is defined on the pair space only")
    qt_st = np.diag([0.0, 1.0]).astype(complex)
    qs_st = np.diag([1.0, 0.0]).astype(complex)
    if kind is ModelKind.QUANTUM_MEASUREMENT:
        st_raw = lambda block: _qm_raw(block, params.k_s, qt_st, None)
    else:
        st_raw = lambda block: _haberkorn_raw(block, params.k_s, qs_st, None)
    return lambda mat: _expanded_raw(mat, params.k_s, st_raw, h)
