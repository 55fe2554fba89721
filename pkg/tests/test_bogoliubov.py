import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import duffing_optomech as dm


def _model_for(reduced, g1):
    steady, _ = dm.steady_state_for_g1(reduced, g1)
    return dm.build_effective(steady, reduced)


class TestBuildEffective:
    def test_identity_transform_without_anharmonicity(self, base_params):
        red = dm.reduce_params(base_params.replace(duffing=(0.0, 0.0)))
        model = _model_for(red, 0.1)
        assert model.r == (0.0, 0.0)
        assert model.mu == (1.0, 1.0)
        assert model.nu == (0.0, 0.0)
        assert model.Omega == (1.0, 1.0)
        assert model.Gp[0] == pytest.approx(0.1, rel=1e-12)
        assert model.n_r[0] == pytest.approx(model.n_th[0], rel=1e-12)

    def test_small_squeeze_frozen_value(self):
        # enhanced Duffing / frequency ratio of 3e-4 at zero displacement
        model = dm.make_model(Gp=(0.0, 0.0), eta_e=0.0, kappa=0.01, gamma=1e-5)
        r = 0.25 * math.log1p(4.0 * 3e-4)
        assert r == pytest.approx(2.9982014387052429e-4, rel=1e-14)

    def test_swap_rate_frozen_value(self):
        model = dm.make_model(Gp=(0.0, 0.0), eta_e=0.3, kappa=0.01, gamma=1e-5)
        assert math.sqrt(model.curly_g_sq) == pytest.approx(0.29995841374263866, rel=1e-14)

    def test_mismatched_damping_rejected(self, base_params):
        bad = base_params.replace(gamma_e=2e-5 * base_params.omega_m[0])
        red = dm.reduce_params(bad)
        steady, _ = dm.steady_state_for_g1(red, 0.1)
        with pytest.raises(dm.InvalidParameterError, match="gamma"):
            dm.build_effective(steady, red)

    @given(lam=st.floats(0.0, 1e-2), g1=st.floats(1e-3, 0.8))
    def test_hyperbolic_identity(self, lam, g1):
        params = dm.default_params()
        red = dm.reduce_params(params.replace(duffing=(lam * params.omega_m[0],) * 2))
        model = _model_for(red, g1)
        for j in (0, 1):
            assert model.mu[j] ** 2 - model.nu[j] ** 2 == pytest.approx(1.0, abs=1e-12)
            # derived consistency: G'^2/Omega = G^2 e^{-4r} / omega
            steady, _ = dm.steady_state_for_g1(red, g1)
            lhs = model.Gp[j] ** 2 / model.Omega[j]
            rhs = steady.G[j] ** 2 * math.exp(-4.0 * model.r[j]) / red.omega_m[j]
            assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-300)

    def test_squeeze_monotone_in_duffing(self, base_params):
        rs = []
        for lam in (0.0, 1e-5, 1e-4, 1e-3):
            red = dm.reduce_params(base_params.replace(duffing=(lam * base_params.omega_m[0],) * 2))
            rs.append(_model_for(red, 0.3).r[0])
        assert all(a < b for a, b in zip(rs, rs[1:]))

    def test_bogoliubov_occupation_bound(self, base_reduced):
        model = _model_for(base_reduced, 0.3)
        for j in (0, 1):
            assert model.n_r[j] > model.n_th[j]
        flat = dm.reduce_params(base_reduced.to_si().replace(duffing=(0.0, 0.0)))
        model0 = _model_for(flat, 0.3)
        assert model0.n_r[0] == pytest.approx(model0.n_th[0], rel=1e-12)


class TestRwaDiagnostics:
    def test_decoupled_is_valid(self):
        model = dm.make_model(Gp=(0.0, 0.0), eta_e=0.0, kappa=0.01, gamma=1e-5)
        diag = dm.rwa_diagnostics(model)
        assert diag.coupling_ratio == 0.0
        assert diag.noise_ratio == 0.0
        assert diag.rwa_ok

    def test_strong_drive_without_anharmonicity_fails(self, base_params):
        red = dm.reduce_params(base_params.replace(duffing=(0.0, 0.0), input_power=1e-2))
        model = _model_for(red, dm.solve_self_consistent(red).G[0])
        assert not dm.rwa_diagnostics(model).rwa_ok

    def test_anharmonicity_restores_validity(self, base_params):
        # pointwise over the power grid the squeezed-frame ratio lies below the bare one
        powers = np.logspace(-6, -2, 10)
        for p in powers:
            red0 = dm.reduce_params(base_params.replace(duffing=(0.0, 0.0), input_power=float(p)))
            red1 = dm.reduce_params(base_params.replace(input_power=float(p)))
            m0 = dm.build_effective(dm.solve_self_consistent(red0), red0)
            m1 = dm.build_effective(dm.solve_self_consistent(red1), red1)
            assert m1.Gp[0] / m1.Omega[0] <= m0.Gp[0] / m0.Omega[0] + 1e-15


class TestSwapTime:
    def test_single_coupling(self):
        model = dm.make_model(Gp=(0.0, 0.0), eta_e=0.5, kappa=0.0, gamma=0.0)
        assert dm.swap_time(model) == pytest.approx(2.0 * math.pi, rel=1e-14)

    def test_symmetric_case(self):
        gp = 0.2
        model = dm.make_model(Gp=(gp, gp), eta_e=math.sqrt(2.0) * gp, kappa=0.0, gamma=0.0)
        assert dm.swap_time(model) == pytest.approx(math.pi / (2.0 * gp), rel=1e-14)

    def test_matched_single_mirror_case(self):
        gp = 0.17
        model = dm.make_model(Gp=(gp, 0.0), eta_e=gp, kappa=0.0, gamma=0.0)
        assert dm.swap_time(model) == pytest.approx(math.pi / (math.sqrt(2.0) * gp), rel=1e-14)

    def test_overdamped_raises(self):
        model = dm.make_model(Gp=(1e-3, 1e-3), eta_e=0.0, kappa=0.5, gamma=1e-5)
        assert model.curly_g_sq < 0.0
        with pytest.raises(dm.OverdampedRegimeError):
            dm.swap_time(model)

    def test_diverges_as_couplings_vanish(self):
        inverse_times = []
        for scale in (1e-2, 1e-4, 1e-6, 1e-8):
            model = dm.make_model(Gp=(scale, scale), eta_e=scale, kappa=0.0, gamma=0.0)
            inverse_times.append(1.0 / dm.swap_time(model))
        assert all(a > b for a, b in zip(inverse_times, inverse_times[1:]))
        assert inverse_times[-1] < 1e-8

    def test_lossless_helper(self, base_reduced):
        model = _model_for(base_reduced, 0.3)
        free = dm.lossless(model)
        assert free.kappa == 0.0 and free.gamma == 0.0
        assert free.curly_g_sq == pytest.approx(free.coupling_sq, rel=1e-15)
        assert dm.swap_time(free) == pytest.approx(math.pi / math.sqrt(model.coupling_sq), rel=1e-12)
