"""Closed-form evolutions, decompositions, and residual diagnostics.

With a frozen Hamiltonian and triplet channel the dynamics from a pure
initial state alpha|S> + beta|T> integrate in closed form. Writing
w = exp(-k_S t), the expanded-space state of the measurement model is
diagonal-plus-one-coherence:

    rho_PP = |alpha|^2 (1 - w)      rho_SS = |alpha|^2 w
    rho_ST = alpha beta* w          rho_TT = |beta|^2

The Haberkorn state is identical except the coherence decays at half the
rate, rho_ST = alpha beta* sqrt(w).

The measurement-model state is a convex mixture of three constant states:
the initial state with weight w_0 = w, the product level |P><P| with
weight w_P = (1 - w) |alpha|^2, and the triplet level |T><T| with weight
w_T = (1 - w) |beta|^2. All three weights sum to one, and keeping all
three matters: the population that reacted without forming product is on
the triplet level, not gone. The conditional state of the surviving pairs
therefore carries the denominator w_0 + w_T,

    rho_cond = (w_0 rho_0 + w_T |T><T|) / (w_0 + w_T)

and solves the renormalized (nonlinear) pair equation. Normalizing only
two weights, as if no product had yet formed,

    rho_bad = w_0 rho_0 + (1 - w_0) |T><T|

looks superficially similar but does not solve that equation; the
residual diagnostic below quantifies the gap. ``kominis_claimed_state``
reproduces this two-weight form deliberately so the inconsistency can be
exhibited rather than merely asserted.

A caveat on reading physics into any of this: a mixed density matrix
admits infinitely many decompositions, and none of them is privileged
just because its pieces look meaningful. The decompositions here are
bookkeeping devices chosen to make the weight normalization explicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, VanishingTraceError, WeightError
from .models import RateParams, normalized_rhs
from .spinsys import (
    PST,
    ST,
    DensityMatrix,
    InitialState,
    Projectors,
    make_projectors,
)

WEIGHT_SUM_TOL = 1e-12
_ST_PROJ = make_projectors(ST)


def _check_domain(k_s: float, t: float) -> None:
    if t < 0.0:
        raise DomainError(f"time must be nonnegative, got {t!r}")
    if k_s < 0.0:
        raise DomainError(f"k_s must be nonnegative, got {k_s!r}")


@dataclass(frozen=True)
class DecompositionWeights:
    """Convex weights of the initial, triplet-projected, and product parts."""

    w_0: float
    w_t: float
    w_p: float

    def __post_init__(self):
        if min(self.w_0, self.w_t, self.w_p) < 0.0:
            raise WeightError(
                f"weights must be nonnegative, got ({self.w_0!r}, {self.w_t!r}, {self.w_p!r})"
            )
        total = self.w_0 + self.w_t + self.w_p
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise WeightError(f"weights sum to {total!r}, expected 1")


@dataclass(frozen=True, eq=False)
class KominisSplit:
    """Unrecombined-versus-product split of the expanded state.

    ``unrecombined`` collects everything still in the pair space: the
    unreacted fraction plus the reacted-but-not-recombined fraction that
    was projected onto the triplet. Its trace shrinks with time, so it is
    not a proper density matrix on its own. ``product`` holds the
    accumulated product population on the (P, P) entry only. The two
    matrices sum to the full expanded state exactly.
    """

    unrecombined: np.ndarray
    product: np.ndarray


def qm_expanded_solution(state: InitialState, k_s: float, t: float) -> DensityMatrix:
    """Measurement-model state in the expanded basis at time t."""
    _check_domain(k_s, t)
    aa, bb, ab = state.products()
    w = math.exp(-k_s * t)
    mat = np.zeros((3, 3), dtype=complex)
    mat[0, 0] = aa * (1.0 - w)
    mat[1, 1] = aa * w
    mat[1, 2] = ab * w
    mat[2, 1] = np.conj(ab) * w
    mat[2, 2] = bb
    return DensityMatrix(mat, PST)


def hk_expanded_solution(state: InitialState, k_s: float, t: float) -> DensityMatrix:
    """Haberkorn state in the expanded basis; coherence decays at k_S / 2."""
    _check_domain(k_s, t)
    aa, bb, ab = state.products()
    w = math.exp(-k_s * t)
    half = math.exp(-0.5 * k_s * t)
    mat = np.zeros((3, 3), dtype=complex)
    mat[0, 0] = aa * (1.0 - w)
    mat[1, 1] = aa * w
    mat[1, 2] = ab * half
    mat[2, 1] = np.conj(ab) * half
    mat[2, 2] = bb
    return DensityMatrix(mat, PST)


def decomposition_weights(state: InitialState, k_s: float, t: float) -> DecompositionWeights:
    """Three-part weights (w_0, w_T, w_P) of the measurement-model state."""
    _check_domain(k_s, t)
    aa, bb, _ = state.products()
    w = math.exp(-k_s * t)
    return DecompositionWeights(w_0=w, w_t=(1.0 - w) * bb, w_p=(1.0 - w) * aa)


def reconstruct_from_weights(state: InitialState, weights: DecompositionWeights) -> DensityMatrix:
    """Reassemble w_0 rho_0 + w_T |T><T| + w_P |P><P| in the expanded basis."""
    aa, bb, ab = state.products()
    mat = np.zeros((3, 3), dtype=complex)
    mat[0, 0] = weights.w_p
    mat[1, 1] = weights.w_0 * aa
    mat[1, 2] = weights.w_0 * ab
    mat[2, 1] = weights.w_0 * np.conj(ab)
    mat[2, 2] = weights.w_0 * bb + weights.w_t
    return DensityMatrix(mat, PST)


def kominis_decomposition(state: InitialState, k_s: float, t: float) -> KominisSplit:
    """Split the expanded state into unrecombined and product components.

    The pieces sum to ``qm_expanded_solution`` exactly; the unrecombined
    piece carries the time-varying trace exp(-k_S t) |alpha|^2 + |beta|^2.
    """
    _check_domain(k_s, t)
    aa, bb, ab = state.products()
    w = math.exp(-k_s * t)
    unrec = np.zeros((3, 3), dtype=complex)
    unrec[1, 1] = aa * w
    unrec[1, 2] = ab * w
    unrec[2, 1] = np.conj(ab) * w
    unrec[2, 2] = bb
    prod = np.zeros((3, 3), dtype=complex)
    prod[0, 0] = aa * (1.0 - w)
    return KominisSplit(unrecombined=unrec, product=prod)


def unrecombined_state(state: InitialState, k_s: float, t: float) -> DensityMatrix:
    """Unit-trace conditional state of the pairs still unrecombined.

    Uses the full three-weight bookkeeping, so the normalizing denominator
    is w_0 + w_T rather than one. Agrees with renormalizing the restricted
    expanded-space state, and solves the renormalized pair equation.
    """
    _check_domain(k_s, t)
    aa, bb, ab = state.products()
    w = math.exp(-k_s * t)
    w_t = (1.0 - w) * bb
    denom = w + w_t
    if denom <= 1e-14:
        raise VanishingTraceError(
            f"surviving-pair weight {denom!r} vanished; no conditional state exists"
        )
    mat = np.array(
        [[w * aa, w * ab], [w * np.conj(ab), w * bb + w_t]], dtype=complex
    )
    return DensityMatrix(mat / denom, ST)


def kominis_claimed_state(state: InitialState, k_s: float, t: float) -> DensityMatrix:
    """Two-weight normalization of the surviving pairs, reproduced as claimed.

    Weights w_0 = exp(-k_S t) and 1 - w_0 are normalized against each
    other as if the product weight were zero throughout. The result has
    unit trace by construction but does not solve the renormalized pair
    equation; see ``normalized_evolution_residual``.
    """
    _check_domain(k_s, t)
    aa, bb, ab = state.products()
    w = math.exp(-k_s * t)
    mat = np.array(
        [[w * aa, w * ab], [w * np.conj(ab), w * bb + (1.0 - w)]], dtype=complex
    )
    return DensityMatrix(mat, ST)


def independent_entry_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    """Euclidean distance over the independent entries of two states.

    Same-basis states only. Each Hermitian off-diagonal pair contributes
    once (upper triangle), so for pair-space states this reads the
    (SS, ST, TT) triple as a vector in C^3.
    """
    if a.basis.kind is not b.basis.kind:
        raise DomainError("states must share a basis")
    diff = a.mat - b.mat
    idx = np.triu_indices(diff.shape[0])
    return float(np.sqrt(np.sum(np.abs(diff[idx]) ** 2)))


def normalized_evolution_residual(
    state_fn: Callable[[float], DensityMatrix],
    k_s: float,
    proj: Projectors | None = None,
    t: float = 1.0,
    h: float | None = None,
) -> float:
    """How far a state path is from solving the renormalized pair equation.

    Returns the Frobenius norm of the central finite difference of
    ``state_fn`` at ``t`` minus the division-free generator applied to
    ``state_fn(t)``. A path that solves the equation scores at the
    differencing floor, around 1e-10 for the default step; a path that
    does not scores orders of magnitude higher.
    """
    if h is None:
        h = 1e-6 * max(1.0, 1.0 / k_s) if k_s > 0 else 1e-6
    if h <= 0.0:
        raise DomainError(f"finite-difference step must be positive, got {h!r}")
    if proj is None:
        proj = _ST_PROJ
    params = RateParams(k_s=k_s)
    fd = (state_fn(t + h).mat - state_fn(t - h).mat) / (2.0 * h)
    rhs = normalized_rhs(state_fn(t), params, proj)
    return float(np.linalg.norm(fd - rhs))
