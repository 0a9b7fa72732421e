"""
数値積分・データ生成・ロールアウトのテスト
"""
import math

import numpy as np
import pytest

from collectors.simulator import euler_step, integrate, make_dataset, rk4_step, rollout_error
from core.errors import IntegrationError, InvalidParameterError
from models.schemas import Integrator, NoiseSpec, TrajectorySpec
from tests.helpers import recipe_dataset


def oscillator_solution(system, x0, t):
    omega = system.angular_frequency()
    m = system.params["m"]
    q0, p0 = x0
    q = q0 * math.cos(omega * t) + p0 / (m * omega) * math.sin(omega * t)
    p = -m * omega * q0 * math.sin(omega * t) + p0 * math.cos(omega * t)
    return np.array([q, p])


class TestSteppers:
    def test_euler_step(self, oscillator):
        np.testing.assert_allclose(euler_step(oscillator.field, np.array([1.0, 0.0]), 0.1), [1.0, -0.1])

    def test_rk4_step_matches_taylor_series(self, oscillator):
        h = 0.1
        x = np.array([1.0, 0.0])
        # 線形系 ẋ = Ax の RK4 は exp(hA) の4次までのテイラー展開
        A = np.array([[0.0, 2.0], [-1.0, 0.0]])
        hA = h * A
        expected = (np.eye(2) + hA + hA @ hA / 2 + hA @ hA @ hA / 6 + hA @ hA @ hA @ hA / 24) @ x
        np.testing.assert_allclose(rk4_step(oscillator.field, x, h), expected, rtol=1e-14)


class TestIntegrate:
    def test_number_of_points(self, oscillator):
        trajectory = integrate(oscillator.field, TrajectorySpec(x0=(1.0, 0.0), h=0.25, t_end=1.0))
        assert len(trajectory) == 5
        np.testing.assert_allclose(trajectory.times, [0.0, 0.25, 0.5, 0.75, 1.0])
        np.testing.assert_array_equal(trajectory.states[0], [1.0, 0.0])

    def test_one_period_against_closed_form(self, oscillator):
        period = 2 * math.pi / oscillator.angular_frequency()
        h = period / 200
        trajectory = integrate(oscillator.field, TrajectorySpec(x0=(2.0, 0.0), h=h, t_end=period))
        assert len(trajectory) == 201
        expected = oscillator_solution(oscillator, (2.0, 0.0), trajectory.times[-1])
        assert np.linalg.norm(trajectory.states[-1] - expected) <= 1e-4

    def test_fourth_order_convergence(self, oscillator):
        def final_error(h):
            trajectory = integrate(oscillator.field, TrajectorySpec(x0=(2.0, 0.0), h=h, t_end=2.0))
            return np.linalg.norm(trajectory.states[-1] - oscillator_solution(oscillator, (2.0, 0.0), 2.0))

        ratio = final_error(0.1) / final_error(0.05)
        assert 8 <= ratio <= 32

    def test_euler_is_first_order(self, oscillator):
        def final_error(h):
            spec = TrajectorySpec(x0=(2.0, 0.0), h=h, t_end=1.0, integrator=Integrator.EULER)
            trajectory = integrate(oscillator.field, spec)
            return np.linalg.norm(trajectory.states[-1] - oscillator_solution(oscillator, (2.0, 0.0), 1.0))

        ratio = final_error(0.01) / final_error(0.005)
        assert 1.5 <= ratio <= 2.5

    def test_non_finite_state_raises(self):
        def blow_up(x):
            return np.array([np.inf, 0.0])

        with pytest.raises(IntegrationError) as excinfo:
            integrate(blow_up, TrajectorySpec(x0=(0.0, 0.0), h=0.1, t_end=1.0))
        assert excinfo.value.step == 1

    def test_truncate_on_failure(self):
        def explode_after_one(x):
            return np.array([1.0, 0.0]) if x[0] < 0.5 else np.array([np.nan, 0.0])

        spec = TrajectorySpec(x0=(0.0, 0.0), h=1.0, t_end=5.0, integrator=Integrator.EULER)
        trajectory = integrate(explode_after_one, spec, truncate_on_failure=True)
        assert len(trajectory) == 2
        np.testing.assert_array_equal(trajectory.states[-1], [1.0, 0.0])

    def test_non_finite_initial_state(self, oscillator):
        with pytest.raises(IntegrationError) as excinfo:
            integrate(oscillator.field, TrajectorySpec(x0=(float("nan"), 0.0), h=0.1, t_end=1.0))
        assert excinfo.value.step == 0

    def test_t_end_shorter_than_step_is_rejected(self):
        with pytest.raises(ValueError):
            TrajectorySpec(x0=(0.0, 0.0), h=0.5, t_end=0.25)


class TestMakeDataset:
    def test_recipe_dataset_sizes(self):
        assert recipe_dataset("oscillator").n_samples == 15
        assert recipe_dataset("pendulum").n_samples == 24

    def test_noise_free_points_lie_on_trajectories(self, oscillator):
        spec = TrajectorySpec(x0=(1.0, 0.0), h=0.25, t_end=1.0)
        dataset = make_dataset(oscillator, [(1.0, 0.0), (2.0, 0.0)], spec, NoiseSpec(std=0.0))
        first = integrate(oscillator.field, spec)
        np.testing.assert_array_equal(dataset.points[:5], first.states)
        np.testing.assert_array_equal(dataset.derivatives, oscillator.field(dataset.points))

    def test_noise_free_ignores_seed(self, oscillator):
        spec = TrajectorySpec(x0=(1.0, 0.0), h=0.25, t_end=1.0)
        a = make_dataset(oscillator, [(1.0, 0.0)], spec, NoiseSpec(std=0.0, seed=1))
        b = make_dataset(oscillator, [(1.0, 0.0)], spec, NoiseSpec(std=0.0, seed=2))
        np.testing.assert_array_equal(a.points, b.points)
        np.testing.assert_array_equal(a.derivatives, b.derivatives)

    def test_deterministic_for_seed(self):
        a = recipe_dataset("oscillator", seed=7)
        b = recipe_dataset("oscillator", seed=7)
        c = recipe_dataset("oscillator", seed=8)
        np.testing.assert_array_equal(a.points, b.points)
        np.testing.assert_array_equal(a.derivatives, b.derivatives)
        assert not np.array_equal(a.points, c.points)

    def test_noise_standard_deviation(self, oscillator):
        spec = TrajectorySpec(x0=(1.0, 0.0), h=0.25, t_end=1.0)
        clean = make_dataset(oscillator, [(1.0, 0.0)], spec, NoiseSpec(std=0.0))
        residuals = []
        for seed in range(100):
            noisy = make_dataset(oscillator, [(1.0, 0.0)], spec, NoiseSpec(std=0.1, seed=seed))
            residuals.append(noisy.points - clean.points)
            residuals.append(noisy.derivatives - clean.derivatives)
        std = np.concatenate(residuals).std()
        assert abs(std - 0.1) <= 0.01

    def test_meta(self, oscillator_dataset):
        meta = oscillator_dataset.meta
        assert meta.system == "oscillator"
        assert meta.ics == [[1.0, 0.0], [2.25, 0.0], [3.5, 0.0]]
        assert meta.noise_std == 0.1
        assert meta.h == 0.25

    def test_requires_initial_conditions(self, oscillator):
        spec = TrajectorySpec(x0=(1.0, 0.0), h=0.25, t_end=1.0)
        with pytest.raises(InvalidParameterError):
            make_dataset(oscillator, [], spec, NoiseSpec())


class TestRollout:
    def test_identical_fields_have_zero_error(self, oscillator):
        result = rollout_error(oscillator.field, oscillator.field, (2.0, 0.0), 0.01, 1.0)
        assert len(result.times) == 101
        np.testing.assert_array_equal(result.errors, np.zeros(101))
        assert result.mean_error == 0.0

    def test_pairs_start_at_zero(self, oscillator, oscillator_models):
        model = next(iter(oscillator_models.values()))
        result = rollout_error(oscillator.field, model, (2.0, 0.0), 0.01, 1.0)
        pairs = result.as_pairs()
        assert pairs[0] == (0.0, 0.0)
        assert all(b[0] > a[0] for a, b in zip(pairs, pairs[1:]))
        assert result.mean_error > 0

    def test_diverging_model_is_truncated(self, oscillator):
        def diverging(x):
            return np.array([np.inf, 0.0]) if x[0] > 1.5 else np.array([1.0, 0.0])

        result = rollout_error(oscillator.field, diverging, (1.0, 0.0), 0.1, 2.0, Integrator.EULER)
        assert len(result.times) < 21
        assert len(result.true) == len(result.learned)
