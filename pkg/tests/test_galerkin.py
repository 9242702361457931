import math
from dataclasses import replace

import numpy as np
import pytest

from conftest import mode_vector
from entrodim.errors import ConfigurationError, DivergenceError, NewtonError
from entrodim.galerkin import (
    EnergyTrace,
    GalerkinState,
    Nonlinearity,
    SolverConfig,
    difference_energy_trace,
    enumerate_equilibria,
    equilibrium_residual,
    evolve,
    get_basis,
    smoothing_ratio,
    solve_equilibrium,
    verify_equilibrium_lipschitz,
    write_state_csv,
    write_trace_csv,
)


class TestBasis:
    def test_orthonormality(self, fast_cfg):
        basis = get_basis(fast_cfg)
        gram = basis.weight * basis.S.T @ basis.S
        assert np.max(np.abs(gram - np.eye(fast_cfg.modes))) < 1e-12

    def test_norms(self, fast_cfg):
        basis = get_basis(fast_cfg)
        c = mode_vector(fast_cfg.modes, 3, 2.0)
        assert basis.l2(c) == pytest.approx(2.0, rel=1e-14)
        assert basis.h1(c) == pytest.approx(2.0 * 3.0, rel=1e-14)  # sqrt(lam_3) = 3
        assert basis.sup(c) == pytest.approx(2.0 * math.sqrt(2.0 / math.pi), rel=1e-3)

    def test_config_validation(self):
        with pytest.raises(ConfigurationError):
            SolverConfig(modes=16, quadrature_nodes=10)  # below 3M/2
        with pytest.raises(ConfigurationError):
            SolverConfig(integrator="rk7")


class TestEvolve:
    def test_zero_is_fixed(self, fast_cfg, desk_nl):
        out = evolve(GalerkinState(coeffs=np.zeros(32)), desk_nl, 10.0, 1.0, fast_cfg)
        assert np.all(out.coeffs == 0.0)

    def test_converges_to_bounded_equilibrium(self, fast_cfg, desk_nl):
        state = GalerkinState(coeffs=mode_vector(32, 1, 0.05))
        basis = get_basis(fast_cfg)
        out = evolve(state, desk_nl, 10.0, 8.0, fast_cfg)
        assert basis.sup(out.coeffs) <= math.sqrt(10.0)
        res = equilibrium_residual(out.coeffs, desk_nl, 10.0, basis)
        assert np.linalg.norm(res) < 1e-6
        assert out.coeffs[0] > 1.0  # nonzero branch, not the origin

    def test_spectral_projection_freezes_subspace(self, fast_cfg):
        nl = Nonlinearity.spectral_projection(10.0, 3)
        rng = np.random.default_rng(3)
        c0 = np.zeros(32)
        c0[:3] = rng.normal(size=3)
        out = evolve(GalerkinState(coeffs=c0), nl, 10.0, 2.0, fast_cfg)
        assert np.max(np.abs(out.coeffs - c0)) <= 1e-10

    def test_odd_symmetry(self, fast_cfg, desk_nl):
        c0 = mode_vector(32, 1, 0.3) - mode_vector(32, 3, 0.1)
        a = evolve(GalerkinState(coeffs=c0), desk_nl, 10.0, 0.2, fast_cfg)
        b = evolve(GalerkinState(coeffs=-c0), desk_nl, 10.0, 0.2, fast_cfg)
        assert np.max(np.abs(a.coeffs + b.coeffs)) < 1e-12

    def test_semigroup_property(self, fast_cfg, desk_nl):
        c0 = mode_vector(32, 1, 0.4) + mode_vector(32, 2, 0.2)
        dt = fast_cfg.effective_dt
        one = evolve(GalerkinState(coeffs=c0), desk_nl, 10.0, 0.0213, fast_cfg)
        two = evolve(one, desk_nl, 10.0, 0.0131, fast_cfg)
        direct = evolve(GalerkinState(coeffs=c0), desk_nl, 10.0, 0.0213 + 0.0131, fast_cfg)
        assert np.linalg.norm(direct.coeffs - two.coeffs) <= 10.0 * dt

    def test_blowup_detection(self, desk_nl):
        # dt so large that the explicit cubic term dominates the implicit damping
        cfg = SolverConfig(modes=16, dt=1.0)
        with pytest.raises(DivergenceError) as err:
            evolve(GalerkinState(coeffs=mode_vector(16, 1, 5.0)), desk_nl, 0.5, 20.0, cfg)
        assert "dt" in str(err.value) and "modes" in str(err.value)

    def test_mode_truncation_convergence(self, desk_nl):
        # same dt isolates the spatial truncation error
        cfg_a = SolverConfig(modes=24, dt=1e-4)
        cfg_b = SolverConfig(modes=48, dt=1e-4)
        c0 = mode_vector(24, 1, 0.5) + mode_vector(24, 2, 0.25)
        a = evolve(GalerkinState(coeffs=c0), desk_nl, 10.0, 2.0, cfg_a)
        b = evolve(GalerkinState(coeffs=np.concatenate([c0, np.zeros(24)])), desk_nl, 10.0, 2.0, cfg_b)
        assert np.linalg.norm(b.coeffs[:24] - a.coeffs) < 1e-6
        assert np.linalg.norm(b.coeffs[24:]) < 1e-6

    def test_etdrk2_second_order_self_convergence(self, desk_nl):
        c0 = mode_vector(24, 1, 0.3)

        def run(dt):
            cfg = SolverConfig(modes=24, dt=dt, integrator="etdrk2")
            return evolve(GalerkinState(coeffs=c0), desk_nl, 10.0, 0.5, cfg).coeffs

        ref = run(5e-5)
        e_coarse = np.linalg.norm(run(8e-4) - ref)
        e_fine = np.linalg.norm(run(2e-4) - ref)
        assert e_coarse / e_fine > 8.0  # ~16 for a second-order scheme
        # and both integrators agree on the limit
        imex = evolve(
            GalerkinState(coeffs=c0), desk_nl, 10.0, 0.5, SolverConfig(modes=24, dt=2e-5)
        )
        assert np.linalg.norm(ref - imex.coeffs) < 5e-4


class TestEnergyTrace:
    def test_identical_pair_is_zero(self, fast_cfg, desk_nl):
        u = GalerkinState(coeffs=mode_vector(32, 1, 0.7))
        tr = difference_energy_trace(u, u, desk_nl, 10.0, 0.05, fast_cfg)
        assert np.all(tr.W == 0.0) and np.all(tr.V == 0.0)
        assert tr.growth_ratio(10.0) == 0.0

    def test_growth_inequality_near_attractor(self, fast_cfg, desk_nl):
        u = evolve(GalerkinState(coeffs=mode_vector(32, 1, 0.3)), desk_nl, 10.0, 5.0, fast_cfg)
        v = evolve(GalerkinState(coeffs=mode_vector(32, 2, 0.4)), desk_nl, 10.0, 5.0, fast_cfg)
        tr = difference_energy_trace(u, v, desk_nl, 10.0, 0.3, fast_cfg)
        assert tr.growth_ratio(10.0) <= 1.0 + 1e-6 + 5.0 * fast_cfg.effective_dt

    def test_contraction_below_lambda_one(self, fast_cfg, desk_nl):
        u = GalerkinState(coeffs=mode_vector(32, 1, 0.2))
        v = GalerkinState(coeffs=mode_vector(32, 1, 0.1) + mode_vector(32, 2, 0.05))
        tr = difference_energy_trace(u, v, desk_nl, 0.5, 1.0, fast_cfg)
        assert np.all(tr.W <= tr.W[0] * (1.0 + 1e-12))

    def test_integral_is_trapezoid(self):
        t = np.linspace(0.0, 1.0, 11)
        tr = EnergyTrace(times=t, W=np.ones(11), V=t.copy())
        # trapezoid of V = t on [0, 1] is t^2/2 exactly
        assert np.allclose(tr.integral_V(), t**2 / 2.0, atol=1e-15)


class TestSmoothing:
    def test_desk_pair_below_bound(self, fast_cfg, desk_nl):
        u = evolve(GalerkinState(coeffs=mode_vector(32, 1, 0.3)), desk_nl, 10.0, 5.0, fast_cfg)
        v = GalerkinState(coeffs=u.coeffs + 1e-6 * mode_vector(32, 1, 1.0))
        r = smoothing_ratio(u, v, desk_nl, 10.0, fast_cfg)
        assert r <= math.sqrt(80.0)

    def test_symmetry(self, fast_cfg, desk_nl):
        u = GalerkinState(coeffs=mode_vector(32, 1, 0.5))
        v = GalerkinState(coeffs=mode_vector(32, 2, 0.25))
        assert smoothing_ratio(u, v, desk_nl, 10.0, fast_cfg) == pytest.approx(
            smoothing_ratio(v, u, desk_nl, 10.0, fast_cfg), rel=1e-12
        )

    def test_degenerate_pair_raises(self, fast_cfg, desk_nl):
        u = GalerkinState(coeffs=mode_vector(32, 1, 0.5))
        with pytest.raises(ConfigurationError):
            smoothing_ratio(u, u, desk_nl, 10.0, fast_cfg)

    def test_spectral_projection_closed_form(self, fast_cfg):
        # linear diagonal flow: every mode evolves by an explicit IMEX factor
        lam, n, t_star = 10.0, 3, 0.04
        nl = Nonlinearity.spectral_projection(lam, n)
        basis = get_basis(fast_cfg)
        d0 = mode_vector(32, 2, 0.3) + mode_vector(32, 5, 0.4) + mode_vector(32, 9, 0.1)
        u = GalerkinState(coeffs=mode_vector(32, 1, 1.0) + d0)
        v = GalerkinState(coeffs=mode_vector(32, 1, 1.0))
        got = smoothing_ratio(u, v, nl, lam, fast_cfg, t_star=t_star)
        dt = fast_cfg.effective_dt
        nsteps = max(1, math.ceil(t_star / dt - 1e-12))
        last = t_star - (nsteps - 1) * dt
        fac = np.ones(32)
        for step_dt, reps in ((dt, nsteps - 1), (last, 1)):
            f = np.ones(32)
            f[n:] = 1.0 / (1.0 + step_dt * (basis.lamj[n:] - lam))
            fac *= f**reps
        w = d0 * fac
        want = math.sqrt(np.sum(basis.lamj * w * w)) / np.linalg.norm(d0)
        assert got == pytest.approx(want, rel=1e-12)


class TestEquilibria:
    def test_zero_guess(self, fast_cfg, desk_nl):
        out = solve_equilibrium(GalerkinState(coeffs=np.zeros(32)), desk_nl, 10.0, fast_cfg)
        assert np.all(out.coeffs == 0.0)

    def test_seven_branches_at_lambda_ten(self, fast_cfg, desk_nl):
        eqs = enumerate_equilibria(desk_nl, 10.0, fast_cfg)
        assert len(eqs) == 7
        basis = get_basis(fast_cfg)
        for eq in eqs:
            res = equilibrium_residual(eq.coeffs, desk_nl, 10.0, basis)
            assert np.linalg.norm(res) <= fast_cfg.newton_tol
        for i in range(len(eqs)):
            for j in range(i + 1, len(eqs)):
                assert np.linalg.norm(eqs[i].coeffs - eqs[j].coeffs) > 1e-4

    def test_spectral_projection_subspace_residuals(self, fast_cfg):
        nl = Nonlinearity.spectral_projection(10.0, 3)
        basis = get_basis(fast_cfg)
        rng = np.random.default_rng(12)
        for _ in range(50):
            c = np.zeros(32)
            c[:3] = rng.normal(size=3)
            assert np.linalg.norm(equilibrium_residual(c, nl, 10.0, basis)) <= 1e-10

    def test_residual_at_double_resolution(self, desk_nl):
        cfg = SolverConfig(modes=32)
        eq = solve_equilibrium(
            GalerkinState(coeffs=mode_vector(32, 1, 1.0)), desk_nl, 10.0, cfg
        )
        cfg2 = SolverConfig(modes=64)
        embedded = np.concatenate([eq.coeffs, np.zeros(32)])
        res = equilibrium_residual(embedded, desk_nl, 10.0, get_basis(cfg2))
        assert np.linalg.norm(res) < 1e-8

    def test_nonconvergence_reports_residual(self, fast_cfg, desk_nl):
        cfg = replace(fast_cfg, newton_max_iter=1, newton_tol=1e-14)
        with pytest.raises(NewtonError) as err:
            solve_equilibrium(
                GalerkinState(coeffs=mode_vector(32, 1, 3.0)), desk_nl, 10.0, cfg
            )
        assert err.value.residual is not None and err.value.residual > 0

    def test_lipschitz_report(self, fast_cfg, desk_nl):
        eqs = enumerate_equilibria(desk_nl, 10.0, fast_cfg)
        pairs = [(a, b) for i, a in enumerate(eqs) for b in eqs[i + 1 :]]
        rep = verify_equilibrium_lipschitz(pairs, 10.0, fast_cfg)
        assert rep.passed and rep.worst_ratio <= math.sqrt(10.0) * 1.02
        assert rep.pair_count == len(pairs)

    def test_lipschitz_modewise_for_linear_subspace(self, fast_cfg):
        # spectral-projection equilibria: pure modes give ratio sqrt(lam_j) <= sqrt(lam)
        basis = get_basis(fast_cfg)
        states = [GalerkinState(coeffs=mode_vector(32, j, 1.0)) for j in (1, 2, 3)]
        pairs = [(states[0], states[1]), (states[1], states[2])]
        rep = verify_equilibrium_lipschitz(pairs, 10.0, fast_cfg)
        assert rep.worst_ratio <= math.sqrt(basis.lamj[2]) * (1.0 + 1e-12)
        assert rep.worst_ratio <= math.sqrt(10.0)


def test_state_and_trace_csv(tmp_path, fast_cfg, desk_nl):
    state = GalerkinState(coeffs=mode_vector(32, 1, 0.5))
    write_state_csv(tmp_path / "state.csv", state)
    lines = (tmp_path / "state.csv").read_text().splitlines()
    assert lines[0] == "j,coeff" and len(lines) == 33

    rows = [(0.0, state.coeffs), (0.1, state.coeffs * 0.5)]
    write_trace_csv(tmp_path / "trace.csv", rows, fast_cfg)
    lines = (tmp_path / "trace.csv").read_text().splitlines()
    assert lines[0] == "t,W,V,L2,Linf,H1" and len(lines) == 3
    w = float(lines[1].split(",")[1])
    assert w == pytest.approx(0.25, rel=1e-14)
