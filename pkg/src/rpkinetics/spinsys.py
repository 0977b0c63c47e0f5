"""Spin bases, projectors, initial states, embeddings, and observables.

The radical-pair spin space is two dimensional, spanned by the singlet |S>
and a single triplet level |T> (the triplet sublevel structure is not
resolved here). The expanded chemical space prepends a product level |P>,
giving the ordered basis (P, S, T) with indices P=0, S=1, T=2.

States are density matrices. A state in the pair space may carry a trace
below one: population lost to recombination simply disappears there, which
is the standard bookkeeping for spin-selective reactions. The expanded
space restores unit trace by holding the recombined population in |P>.
Coherences between |P> and the pair levels decay essentially instantly on
the reaction timescale, so they are pinned to zero structurally: any PST
matrix with a nonzero P-row off-diagonal entry is rejected.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import densmat
from .errors import (
    BasisError,
    DimensionError,
    InvariantViolationError,
    NormalizationError,
    VanishingTraceError,
)

HERMITICITY_TOL = 1e-10
POSITIVITY_TOL = 1e-10
TRACE_TOL = 1e-10
CROSS_SPECIES_TOL = 1e-12
NORMALIZATION_TOL = 1e-8
TRACE_FLOOR = 1e-14


class BasisKind(enum.Enum):
    """Which spin basis a state lives in."""

    ST = "st"
    PST = "pst"


@dataclass(frozen=True)
class SpinBasis:
    """Ordered basis, either (S, T) or (P, S, T)."""

    kind: BasisKind

    @property
    def dim(self) -> int:
        return 2 if self.kind is BasisKind.ST else 3

    @property
    def labels(self) -> tuple[str, ...]:
        return ("S", "T") if self.kind is BasisKind.ST else ("P", "S", "T")


ST = SpinBasis(BasisKind.ST)
PST = SpinBasis(BasisKind.PST)


def make_basis(kind: BasisKind | str) -> SpinBasis:
    """Return the basis for ``kind`` (enum value or its string name)."""
    if isinstance(kind, str):
        kind = BasisKind(kind.lower())
    return ST if kind is BasisKind.ST else PST


@dataclass(frozen=True, eq=False)
class Projectors:
    """Singlet and triplet projection operators in a given basis."""

    qs: np.ndarray
    qt: np.ndarray
    basis: SpinBasis


def make_projectors(basis: SpinBasis) -> Projectors:
    """Build Q_S and Q_T; in PST they leave the product level untouched."""
    if basis.kind is BasisKind.ST:
        qs = np.diag([1.0, 0.0]).astype(complex)
        qt = np.diag([0.0, 1.0]).astype(complex)
    else:
        qs = np.diag([0.0, 1.0, 0.0]).astype(complex)
        qt = np.diag([0.0, 0.0, 1.0]).astype(complex)
    qs.flags.writeable = False
    qt.flags.writeable = False
    return Projectors(qs=qs, qt=qt, basis=basis)


@dataclass(frozen=True)
class InitialState:
    """Pure initial spin state alpha|S> + beta|T>.

    Amplitudes must be normalized, with enough slack (1e-8) to admit
    hand-typed eight-digit values of 1/sqrt(2). Derived population and
    coherence products are rescaled by the exact norm so downstream states
    carry unit trace to machine precision.
    """

    alpha: complex
    beta: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > NORMALIZATION_TOL:
            raise NormalizationError(
                f"|alpha|^2 + |beta|^2 = {norm!r} violates normalization beyond {NORMALIZATION_TOL}"
            )

    def products(self) -> tuple[float, float, complex]:
        """(|alpha|^2, |beta|^2, alpha*conj(beta)), rescaled to sum-one populations."""
        n = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        return (
            abs(self.alpha) ** 2 / n,
            abs(self.beta) ** 2 / n,
            self.alpha * np.conj(self.beta) / n,
        )


def _validate_density(mat: np.ndarray, basis: SpinBasis) -> None:
    """Raise if ``mat`` is not a valid (possibly improper) state in ``basis``."""
    if mat.shape != (basis.dim, basis.dim):
        raise DimensionError(
            f"state shape {mat.shape} does not match basis {basis.labels}"
        )
    dev = densmat.hermiticity_deviation(mat)
    if dev > HERMITICITY_TOL:
        raise InvariantViolationError(f"state deviates from Hermiticity by {dev:.3e}")
    tr = np.trace(mat)
    if abs(tr.imag) > TRACE_TOL:
        raise InvariantViolationError(f"trace has imaginary part {tr.imag:.3e}")
    if not (0.0 < tr.real <= 1.0 + TRACE_TOL):
        raise InvariantViolationError(f"trace {tr.real!r} outside (0, 1]")
    if basis.kind is BasisKind.PST:
        cross = max(abs(mat[0, 1]), abs(mat[0, 2]), abs(mat[1, 0]), abs(mat[2, 0]))
        if cross > CROSS_SPECIES_TOL:
            raise InvariantViolationError(
                f"product-pair coherence {cross:.3e} exceeds {CROSS_SPECIES_TOL}"
            )
    eigs = densmat.hermitian_eigenvalues(mat, tol=HERMITICITY_TOL)
    if eigs[0] < -POSITIVITY_TOL:
        raise InvariantViolationError(f"negative eigenvalue {eigs[0]:.3e}")


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated density matrix tagged with its basis.

    Hermitian within 1e-10, positive within 1e-10, real trace in (0, 1];
    a trace below one is legitimate and marks recombined population that
    has left the pair space. The stored array is a read-only copy.
    """

    mat: np.ndarray
    basis: SpinBasis

    def __post_init__(self):
        mat = np.array(self.mat, dtype=complex)
        _validate_density(mat, self.basis)
        mat.flags.writeable = False
        object.__setattr__(self, "mat", mat)

    @property
    def trace(self) -> float:
        return float(np.trace(self.mat).real)


@dataclass(frozen=True)
class Observables:
    """Scalar readouts of a state."""

    trace: float
    p_s: float
    p_t: float
    p_p: float
    coherence_abs: float
    purity: float


def initial_density(state: InitialState, basis: SpinBasis) -> DensityMatrix:
    """Outer-product density matrix of the pure initial state.

    In PST the 2x2 pair block sits at the (S, T) positions and the P row
    and column are zero; the trace is one in either basis.
    """
    aa, bb, ab = state.products()
    block = np.array([[aa, ab], [np.conj(ab), bb]], dtype=complex)
    if basis.kind is BasisKind.ST:
        return DensityMatrix(block, basis)
    mat = np.zeros((3, 3), dtype=complex)
    mat[1:, 1:] = block
    return DensityMatrix(mat, basis)


def embed_st_in_pst(rho: DensityMatrix) -> DensityMatrix:
    """Embed a pair-space state into the expanded space with an empty P level."""
    if rho.basis.kind is not BasisKind.ST:
        raise BasisError("embed_st_in_pst expects an ST state")
    mat = np.zeros((3, 3), dtype=complex)
    mat[1:, 1:] = rho.mat
    return DensityMatrix(mat, PST)


def restrict_pst_to_rp(rho: DensityMatrix) -> DensityMatrix:
    """Drop the product row and column, keeping the (possibly improper) pair block."""
    if rho.basis.kind is not BasisKind.PST:
        raise BasisError("restrict_pst_to_rp expects a PST state")
    return DensityMatrix(rho.mat[1:, 1:], ST)


def renormalize(rho: DensityMatrix) -> DensityMatrix:
    """Rescale to unit trace; errors once essentially everything has recombined."""
    tr = np.trace(rho.mat).real
    if tr <= TRACE_FLOOR:
        raise VanishingTraceError(f"trace {tr!r} at or below {TRACE_FLOOR}")
    return DensityMatrix(rho.mat / tr, rho.basis)


def observables(rho: DensityMatrix) -> Observables:
    """Populations, pair coherence magnitude, trace, and purity."""
    mat = rho.mat
    if rho.basis.kind is BasisKind.ST:
        p_p = 0.0
        p_s = float(mat[0, 0].real)
        p_t = float(mat[1, 1].real)
        coherence = abs(mat[0, 1])
    else:
        p_p = float(mat[0, 0].real)
        p_s = float(mat[1, 1].real)
        p_t = float(mat[2, 2].real)
        coherence = abs(mat[1, 2])
    return Observables(
        trace=float(np.trace(mat).real),
        p_s=p_s,
        p_t=p_t,
        p_p=p_p,
        coherence_abs=float(coherence),
        purity=densmat.purity(mat),
    )
