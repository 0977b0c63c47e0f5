"""Bases, projectors, initial states, embeddings, and observables."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rpkinetics import densmat
from rpkinetics.errors import (
    BasisError,
    InvariantViolationError,
    NormalizationError,
    VanishingTraceError,
)
from rpkinetics.spinsys import (
    PST,
    ST,
    BasisKind,
    DensityMatrix,
    InitialState,
    embed_st_in_pst,
    initial_density,
    make_basis,
    make_projectors,
    observables,
    renormalize,
    restrict_pst_to_rp,
)

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def equal_superposition():
    return InitialState(INV_SQRT2, INV_SQRT2)


def expanded_solution_matrix(aa, bb, ab, kt):
    """Independent construction of the measurement-model state at k_S*t = kt."""
    w = math.exp(-kt)
    m = np.zeros((3, 3), dtype=complex)
    m[0, 0] = aa * (1 - w)
    m[1, 1] = aa * w
    m[1, 2] = ab * w
    m[2, 1] = np.conj(ab) * w
    m[2, 2] = bb
    return m


@st.composite
def initial_states(draw):
    parts = draw(
        st.lists(
            st.floats(min_value=-1.0, max_value=1.0, allow_nan=False),
            min_size=4,
            max_size=4,
        )
    )
    alpha = complex(parts[0], parts[1])
    beta = complex(parts[2], parts[3])
    norm = math.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
    if norm < 1e-3:
        alpha, beta, norm = 1.0, 1.0, math.sqrt(2.0)
    return InitialState(alpha / norm, beta / norm)


class TestBasesAndProjectors:
    def test_basis_layout(self):
        st_basis = make_basis("st")
        pst_basis = make_basis(BasisKind.PST)
        assert st_basis.dim == 2 and st_basis.labels == ("S", "T")
        assert pst_basis.dim == 3 and pst_basis.labels == ("P", "S", "T")

    def test_st_projectors(self):
        proj = make_projectors(ST)
        assert np.array_equal(proj.qs, np.diag([1.0, 0.0]))
        assert np.array_equal(proj.qt, np.diag([0.0, 1.0]))
        assert np.allclose(proj.qs + proj.qt, np.eye(2))

    def test_pst_projectors(self):
        proj = make_projectors(PST)
        assert np.array_equal(proj.qs, np.diag([0.0, 1.0, 0.0]))
        assert np.array_equal(proj.qt, np.diag([0.0, 0.0, 1.0]))
        assert np.allclose(proj.qs @ proj.qt, 0)
        # the product level is untouched by either projector
        assert np.allclose(proj.qs + proj.qt, np.diag([0.0, 1.0, 1.0]))

    @pytest.mark.parametrize("basis", [ST, PST])
    def test_projector_algebra(self, basis):
        proj = make_projectors(basis)
        for q in (proj.qs, proj.qt):
            assert np.max(np.abs(q @ q - q)) < 1e-12
            assert np.max(np.abs(q - q.conj().T)) < 1e-12
        assert np.max(np.abs(proj.qs @ proj.qt)) < 1e-12


class TestInitialState:
    def test_rejects_unnormalized(self):
        with pytest.raises(NormalizationError):
            InitialState(INV_SQRT2, 0.9)

    def test_accepts_eight_digit_amplitudes(self):
        InitialState(0.70710678, 0.70710678)

    def test_pure_singlet_density(self):
        rho = initial_density(InitialState(1.0, 0.0), ST)
        assert np.allclose(rho.mat, np.diag([1.0, 0.0]))

    def test_superposition_density_is_outer_product(self):
        state = equal_superposition()
        rho = initial_density(state, ST)
        psi = np.array([state.alpha, state.beta])
        assert np.allclose(rho.mat, np.outer(psi, psi.conj()), atol=1e-12)
        assert np.allclose(rho.mat, 0.5 * np.ones((2, 2)), atol=1e-12)

    def test_pst_embedding_of_initial_density(self):
        rho = initial_density(equal_superposition(), PST)
        assert np.allclose(rho.mat[0, :], 0) and np.allclose(rho.mat[:, 0], 0)
        assert np.allclose(rho.mat[1:, 1:], 0.5 * np.ones((2, 2)), atol=1e-12)
        assert rho.trace == pytest.approx(1.0, abs=1e-12)

    @given(initial_states())
    @settings(max_examples=50, deadline=None)
    def test_initial_density_is_pure(self, state):
        for basis in (ST, PST):
            rho = initial_density(state, basis)
            assert abs(densmat.purity(rho.mat) - 1.0) < 1e-12


class TestEmbedRestrict:
    def test_restrict_of_expanded_solution(self):
        # substitute exp(-kt) = 1/2 into the closed form and drop the P row/col
        m = expanded_solution_matrix(0.5, 0.5, 0.5, math.log(2))
        rho = restrict_pst_to_rp(DensityMatrix(m, PST))
        assert np.allclose(rho.mat, [[0.25, 0.25], [0.25, 0.5]], atol=1e-15)
        assert rho.trace == pytest.approx(0.75, abs=1e-15)

    def test_embed_pure_singlet(self):
        rho = embed_st_in_pst(DensityMatrix(np.diag([1.0, 0.0]), ST))
        assert np.allclose(rho.mat, np.diag([0.0, 1.0, 0.0]))

    def test_round_trip_is_exact(self):
        rng = np.random.default_rng(11)
        x = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        rho = x @ x.conj().T
        rho /= np.trace(rho).real
        dm = DensityMatrix(rho, ST)
        assert np.array_equal(restrict_pst_to_rp(embed_st_in_pst(dm)).mat, dm.mat)

    def test_wrong_basis_is_an_error(self):
        st_state = initial_density(equal_superposition(), ST)
        pst_state = initial_density(equal_superposition(), PST)
        with pytest.raises(BasisError):
            embed_st_in_pst(pst_state)
        with pytest.raises(BasisError):
            restrict_pst_to_rp(st_state)


class TestRenormalize:
    def test_matches_hand_division(self):
        rho = DensityMatrix([[0.25, 0.25], [0.25, 0.5]], ST)
        out = renormalize(rho)
        assert np.allclose(out.mat, [[1 / 3, 1 / 3], [1 / 3, 2 / 3]], atol=1e-15)

    def test_rank_one_rescale(self):
        out = renormalize(DensityMatrix(np.diag([0.5, 0.0]), ST))
        assert np.allclose(out.mat, np.diag([1.0, 0.0]))

    def test_unit_trace_input_unchanged(self):
        rho = initial_density(equal_superposition(), ST)
        out = renormalize(rho)
        assert np.max(np.abs(out.mat - rho.mat)) < 1e-15

    def test_vanishing_trace(self):
        rho = DensityMatrix(np.diag([5e-15, 0.0]), ST)
        with pytest.raises(VanishingTraceError):
            renormalize(rho)


class TestDensityMatrixInvariants:
    def test_rejects_cross_species_coherence(self):
        m = np.diag([0.5, 0.25, 0.25]).astype(complex)
        m[0, 1] = m[1, 0] = 1e-6
        with pytest.raises(InvariantViolationError):
            DensityMatrix(m, PST)

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(InvariantViolationError):
            DensityMatrix([[0.6, 0.55], [0.55, 0.4]], ST)

    def test_rejects_trace_above_one(self):
        with pytest.raises(InvariantViolationError):
            DensityMatrix(np.diag([0.8, 0.5]), ST)

    def test_rejects_non_hermitian(self):
        with pytest.raises(InvariantViolationError):
            DensityMatrix([[0.5, 0.1], [0.4, 0.5]], ST)

    def test_stored_matrix_is_read_only(self):
        rho = initial_density(equal_superposition(), ST)
        with pytest.raises(ValueError):
            rho.mat[0, 0] = 2.0

    @given(initial_states(), st.floats(min_value=0.0, max_value=5.0))
    @settings(max_examples=50, deadline=None)
    def test_pst_trace_splits_into_product_plus_pair(self, state, kt):
        aa, bb, ab = state.products()
        dm = DensityMatrix(expanded_solution_matrix(aa, bb, ab, kt), PST)
        block_trace = restrict_pst_to_rp(dm).trace
        assert abs(dm.trace - (dm.mat[0, 0].real + block_trace)) < 1e-12


class TestObservables:
    def test_expanded_solution_observables(self):
        m = expanded_solution_matrix(0.5, 0.5, 0.5, math.log(2))
        obs = observables(DensityMatrix(m, PST))
        assert obs.trace == pytest.approx(1.0, abs=1e-12)
        assert obs.p_p == pytest.approx(0.25, abs=1e-12)
        assert obs.p_s == pytest.approx(0.25, abs=1e-12)
        assert obs.p_t == pytest.approx(0.5, abs=1e-12)
        assert obs.coherence_abs == pytest.approx(0.25, abs=1e-12)

    def test_pure_triplet(self):
        obs = observables(initial_density(InitialState(0.0, 1.0), ST))
        assert obs.p_t == 1.0
        assert obs.coherence_abs == 0.0

    def test_maximally_mixed_purity(self):
        obs = observables(DensityMatrix(np.diag([0.5, 0.5]), ST))
        assert obs.purity == pytest.approx(0.5)
