"""RK4 stepping, propagation against the closed forms, and error diagnostics."""

import math

import numpy as np
import pytest

from rpkinetics.analytic import qm_expanded_solution, unrecombined_state
from rpkinetics.errors import DomainError, UnsupportedModelError
from rpkinetics.integrate import (
    IntegratorConfig,
    propagate,
    rk4_step,
    step_doubling_error,
    time_grid,
)
from rpkinetics.models import ModelKind, RateParams, rhs_function
from rpkinetics.spinsys import (
    PST,
    ST,
    InitialState,
    initial_density,
    make_projectors,
    restrict_pst_to_rp,
)

INV_SQRT2 = 1.0 / math.sqrt(2.0)
EQUAL = InitialState(INV_SQRT2, INV_SQRT2)
LN2 = math.log(2.0)
PARAMS = RateParams(k_s=1.0)


class TestRk4Step:
    def test_zero_rhs_leaves_state_unchanged(self):
        rho = np.array([[0.5, 0.1], [0.1, 0.5]], dtype=complex)
        out = rk4_step(lambda m: np.zeros_like(m), rho, 0.3)
        assert np.array_equal(out, rho)

    def test_scalar_exponential(self):
        # one step of d(rho)/dt = -rho from 1 with h = 0.1; the classical
        # update is the degree-4 Taylor polynomial of exp(-h)
        out = rk4_step(lambda m: -m, np.array([[1.0 + 0j]]), 0.1)
        poly = 1 - 0.1 + 0.1**2 / 2 - 0.1**3 / 6 + 0.1**4 / 24
        assert out[0, 0].real == pytest.approx(poly, abs=1e-15)
        assert abs(out[0, 0].real - math.exp(-0.1)) < 1e-7

    def test_pure_triplet_fixed_point(self):
        rhs = rhs_function(ModelKind.QUANTUM_MEASUREMENT, PARAMS, make_projectors(ST))
        rho = initial_density(InitialState(0.0, 1.0), ST).mat
        out = rk4_step(rhs, rho, 0.05)
        assert np.allclose(out, rho, atol=1e-15)


class TestPropagate:
    def test_qm_pst_matches_closed_form(self):
        cfg = IntegratorConfig(step=1e-3, t_end=LN2, record_stride=100)
        traj = propagate(ModelKind.QUANTUM_MEASUREMENT, EQUAL, PARAMS, PST, cfg)
        assert traj.final.t == pytest.approx(LN2, abs=1e-15)
        dev = np.max(np.abs(traj.final.state.mat - qm_expanded_solution(EQUAL, 1.0, LN2).mat))
        assert dev <= 1e-10

    def test_normalized_matches_conditional_state(self):
        cfg = IntegratorConfig(step=1e-3, t_end=LN2, record_stride=100)
        traj = propagate(ModelKind.NORMALIZED_QM, EQUAL, PARAMS, ST, cfg)
        dev = np.max(np.abs(traj.final.state.mat - unrecombined_state(EQUAL, 1.0, LN2).mat))
        assert dev <= 1e-8

    def test_haberkorn_pure_singlet(self):
        cfg = IntegratorConfig(step=1e-3, t_end=5.0, record_stride=100)
        traj = propagate(ModelKind.HABERKORN, InitialState(1.0, 0.0), PARAMS, PST, cfg)
        final = traj.final.state.mat
        assert final[0, 0].real == pytest.approx(1.0 - math.exp(-5.0), abs=1e-9)
        assert final[2, 2].real == 0.0

    def test_normalized_model_needs_pair_basis(self):
        cfg = IntegratorConfig(step=1e-2, t_end=1.0)
        with pytest.raises(UnsupportedModelError):
            propagate(ModelKind.NORMALIZED_QM, EQUAL, PARAMS, PST, cfg)

    def test_warns_on_coarse_step(self):
        cfg = IntegratorConfig(step=0.5, t_end=1.0)
        with pytest.warns(UserWarning, match="step"):
            propagate(ModelKind.QUANTUM_MEASUREMENT, EQUAL, PARAMS, PST, cfg)

    def test_times_match_grid_helper(self):
        cfg = IntegratorConfig(step=1e-2, t_end=0.693147, record_stride=7)
        traj = propagate(ModelKind.QUANTUM_MEASUREMENT, EQUAL, PARAMS, PST, cfg)
        assert traj.times.tolist() == time_grid(cfg)
        assert traj.times[0] == 0.0
        assert np.all(np.diff(traj.times) > 0)

    def test_config_validation(self):
        with pytest.raises(DomainError):
            IntegratorConfig(step=0.0, t_end=1.0)
        with pytest.raises(DomainError):
            IntegratorConfig(step=2.0, t_end=1.0)
        with pytest.raises(DomainError):
            IntegratorConfig(step=0.1, t_end=1.0, record_stride=0)


class TestStepDoubling:
    def test_zero_rhs(self):
        rho = np.eye(2, dtype=complex)
        assert step_doubling_error(lambda m: np.zeros_like(m), rho, 0.1) == 0.0

    def test_small_for_smooth_dynamics(self):
        rhs = rhs_function(ModelKind.QUANTUM_MEASUREMENT, PARAMS, make_projectors(ST))
        rho = initial_density(EQUAL, ST).mat
        assert step_doubling_error(rhs, rho, 1e-2) < 1e-10

    def test_halving_scales_like_h_fifth(self):
        rhs = rhs_function(ModelKind.QUANTUM_MEASUREMENT, PARAMS, make_projectors(ST))
        rho = initial_density(EQUAL, ST).mat
        ratio = step_doubling_error(rhs, rho, 2e-2) / step_doubling_error(rhs, rho, 1e-2)
        assert 24.0 <= ratio <= 40.0

    def test_recorded_when_enabled(self):
        cfg = IntegratorConfig(step=1e-2, t_end=0.5, error_check=True)
        traj = propagate(ModelKind.QUANTUM_MEASUREMENT, EQUAL, PARAMS, PST, cfg)
        assert traj.step_error_max is not None
        assert 0.0 < traj.step_error_max < 1e-10


class TestConvergenceAndInvariants:
    def test_fourth_order_convergence(self):
        errors = []
        for step in (1e-2, 5e-3, 2.5e-3):
            cfg = IntegratorConfig(step=step, t_end=1.0, record_stride=10**9)
            traj = propagate(ModelKind.QUANTUM_MEASUREMENT, EQUAL, PARAMS, PST, cfg)
            errors.append(
                np.max(np.abs(traj.final.state.mat - qm_expanded_solution(EQUAL, 1.0, traj.final.t).mat))
            )
        for i in range(len(errors) - 1):
            ratio = errors[i] / errors[i + 1]
            assert 16.0 / 3.0 <= ratio <= 48.0

    def test_pst_trace_is_conserved(self):
        cfg = IntegratorConfig(step=1e-3, t_end=10.0, record_stride=50)
        traj = propagate(ModelKind.QUANTUM_MEASUREMENT, EQUAL, PARAMS, PST, cfg)
        assert max(abs(p.obs.trace - 1.0) for p in traj.points) <= 1e-10

    def test_st_trace_decay_law(self):
        cfg = IntegratorConfig(step=1e-3, t_end=5.0, record_stride=50)
        traj = propagate(ModelKind.QUANTUM_MEASUREMENT, EQUAL, PARAMS, ST, cfg)
        aa, bb, _ = EQUAL.products()
        dev = max(
            abs(p.obs.trace - (aa * math.exp(-p.t) + bb)) for p in traj.points
        )
        assert dev <= 1e-8

    def test_normalized_trace_stays_unit(self):
        cfg = IntegratorConfig(step=1e-3, t_end=5.0, record_stride=50)
        traj = propagate(ModelKind.NORMALIZED_QM, EQUAL, PARAMS, ST, cfg)
        assert max(abs(p.obs.trace - 1.0) for p in traj.points) <= 1e-9

    @pytest.mark.parametrize("kind", [ModelKind.QUANTUM_MEASUREMENT, ModelKind.HABERKORN])
    def test_restriction_commutes_with_propagation(self, kind):
        cfg = IntegratorConfig(step=1e-3, t_end=2.0, record_stride=100)
        expanded = propagate(kind, EQUAL, PARAMS, PST, cfg)
        pair = propagate(kind, EQUAL, PARAMS, ST, cfg)
        for pe, pp in zip(expanded.points, pair.points):
            assert pe.t == pp.t
            restricted = restrict_pst_to_rp(pe.state)
            assert np.max(np.abs(restricted.mat - pp.state.mat)) <= 1e-9
