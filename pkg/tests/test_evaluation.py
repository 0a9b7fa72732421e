"""
評価指標（奇関数誤差・ハミルトニアン統計・格子サンプリング）のテスト
"""
import numpy as np
import pytest

from aggregators.evaluation import EvaluationAggregator, field_grid, hamiltonian_stats, odd_error_stats, symmetric_box
from collectors.simulator import integrate, rollout_error
from core.errors import ContractViolationError, DimensionMismatchError, InvalidParameterError
from models.schemas import Box, EvaluationReport, KernelFamily, TrajectorySpec


class TestOddError:
    def test_true_systems_are_odd(self, oscillator, pendulum):
        for system in (oscillator, pendulum):
            stats = odd_error_stats(system.field, system.portrait_box, samples=2000, seed=1)
            assert stats.mean == 0.0
            assert stats.variance == 0.0
            assert stats.samples == 2000

    def test_odd_symplectic_model_is_odd(self, oscillator, oscillator_models):
        model = oscillator_models[KernelFamily.ODD_SYMPLECTIC]
        stats = odd_error_stats(model.field, oscillator.portrait_box, samples=10000, seed=0)
        assert stats.mean <= 1e-10
        assert stats.variance <= 1e-20

    def test_separable_model_is_not_odd(self, oscillator, oscillator_models):
        model = oscillator_models[KernelFamily.SEPARABLE_GAUSSIAN]
        stats = odd_error_stats(model.field, oscillator.portrait_box, samples=2000, seed=0)
        assert stats.mean > 1e-3

    def test_deterministic_for_seed(self, oscillator_models, oscillator):
        model = oscillator_models[KernelFamily.SEPARABLE_GAUSSIAN]
        a = odd_error_stats(model.field, oscillator.portrait_box, samples=500, seed=5)
        b = odd_error_stats(model.field, oscillator.portrait_box, samples=500, seed=5)
        assert a == b

    def test_constant_field(self):
        def constant(X):
            return np.ones_like(X)

        stats = odd_error_stats(constant, Box(lower=(0.0, -1.0), upper=(1.0, 1.0)), samples=10)
        assert stats.mean == pytest.approx(2 * np.sqrt(2))
        assert stats.variance == pytest.approx(0.0, abs=1e-24)

    def test_rejects_no_samples(self, oscillator):
        with pytest.raises(InvalidParameterError):
            odd_error_stats(oscillator.field, oscillator.portrait_box, samples=0)


class TestHamiltonianStats:
    @pytest.fixture
    def rollout(self, oscillator, oscillator_models):
        model = oscillator_models[KernelFamily.ODD_SYMPLECTIC]
        return rollout_error(oscillator, model, (2.0, 0.0), 0.01, 4.0)

    def test_learned_hamiltonian_is_conserved(self, oscillator, oscillator_models, rollout):
        model = oscillator_models[KernelFamily.ODD_SYMPLECTIC]
        stats = hamiltonian_stats(model, rollout.learned.states, oscillator, rollout.true.states)
        assert stats.variance <= 1e-5
        assert stats.true_variance <= 1e-5
        assert stats.true_mean == pytest.approx(oscillator.hamiltonian([2.0, 0.0]), rel=1e-6)
        assert stats.offset == pytest.approx(stats.mean - stats.true_mean)

    def test_without_true_system(self, oscillator_models, rollout):
        model = oscillator_models[KernelFamily.ODD_SYMPLECTIC]
        stats = hamiltonian_stats(model, rollout.learned.states)
        assert stats.true_mean is None
        assert stats.offset is None

    def test_order_of_states_does_not_matter(self, oscillator_models, rollout):
        model = oscillator_models[KernelFamily.ODD_SYMPLECTIC]
        forward = hamiltonian_stats(model, rollout.learned.states)
        backward = hamiltonian_stats(model, rollout.learned.states[::-1])
        assert backward.mean == pytest.approx(forward.mean, rel=1e-12)
        assert backward.variance == pytest.approx(forward.variance, rel=1e-6, abs=1e-18)

    def test_requires_symplectic_model(self, oscillator_models, rollout):
        with pytest.raises(ContractViolationError):
            hamiltonian_stats(oscillator_models[KernelFamily.SEPARABLE_GAUSSIAN], rollout.learned.states)

    def test_true_energy_along_true_trajectory(self, oscillator, oscillator_models):
        model = oscillator_models[KernelFamily.ODD_SYMPLECTIC]
        trajectory = integrate(oscillator.field, TrajectorySpec(x0=(3.0, 0.0), h=0.01, t_end=2.0))
        stats = hamiltonian_stats(model, trajectory.states, oscillator)
        assert stats.true_mean == pytest.approx(4.5, rel=1e-6)


class TestFieldGrid:
    def test_layout(self, oscillator):
        box = Box(lower=(-1.0, -2.0), upper=(1.0, 2.0))
        grid = field_grid(oscillator.field, box, 3, 5)
        assert list(grid.columns) == ["x1", "x2", "f1", "f2"]
        assert len(grid) == 15
        np.testing.assert_array_equal(grid["x1"].iloc[:3], [-1.0, 0.0, 1.0])
        assert (grid["x2"].iloc[:3] == -2.0).all()
        assert grid["x2"].iloc[-1] == 2.0
        np.testing.assert_array_equal(
            grid[["f1", "f2"]].to_numpy(), oscillator.field(grid[["x1", "x2"]].to_numpy())
        )

    def test_origin_symmetric_box_shows_oddness(self, oscillator):
        grid = field_grid(oscillator.field, Box(lower=(-1.0, -1.0), upper=(1.0, 1.0)), 5, 5)
        F = grid[["f1", "f2"]].to_numpy()
        np.testing.assert_array_equal(F[::-1], -F)

    @pytest.mark.parametrize("nx,ny", [(1, 5), (5, 1), (0, 0)])
    def test_rejects_small_grids(self, oscillator, nx, ny):
        with pytest.raises(InvalidParameterError):
            field_grid(oscillator.field, oscillator.portrait_box, nx, ny)

    def test_rejects_non_planar_box(self, oscillator):
        box = Box(lower=(0.0, 0.0, 0.0), upper=(1.0, 1.0, 1.0))
        with pytest.raises(DimensionMismatchError):
            field_grid(oscillator.field, box, 3, 3)

    def test_box_from_string(self):
        box = Box.from_string("0,4,-4,4")
        assert box.lower == (0.0, -4.0)
        assert box.upper == (4.0, 4.0)
        with pytest.raises(ValueError):
            Box.from_string("0,4,-4")
        with pytest.raises(ValueError):
            Box.from_string("4,0,-4,4")


class TestEvaluationAggregator:
    def test_symplectic_report(self, oscillator, oscillator_models):
        model = oscillator_models[KernelFamily.ODD_SYMPLECTIC]
        rollout = rollout_error(oscillator, model, (2.0, 0.0), 0.01, 1.0)
        report = EvaluationAggregator(oscillator, samples=1000).evaluate(model, rollout, defect=1e-3)
        assert report.system == "oscillator"
        assert report.family is KernelFamily.ODD_SYMPLECTIC
        assert report.seed == 0
        assert report.true_odd_error.mean == 0.0
        assert report.odd_error.mean <= 1e-10
        assert report.hamiltonian is not None
        assert len(report.rollout) == 101
        assert report.rollout[0] == (0.0, 0.0)
        assert report.rollout_mean_error == pytest.approx(rollout.mean_error)
        assert report.symplecticity_defect == 1e-3

    def test_separable_report_has_no_hamiltonian(self, oscillator, oscillator_models):
        model = oscillator_models[KernelFamily.SEPARABLE_GAUSSIAN]
        report = EvaluationAggregator(oscillator, samples=500).evaluate(model)
        assert report.hamiltonian is None
        assert report.rollout == []
        assert report.rollout_mean_error is None
        assert report.symplecticity_defect is None

    def test_report_carries_field_grid(self, oscillator, oscillator_models):
        model = oscillator_models[KernelFamily.ODD_SYMPLECTIC]
        report = EvaluationAggregator(oscillator, samples=200, field_shape=(5, 4)).evaluate(model)
        assert len(report.field_grid) == 20
        grid = np.array(report.field_grid)
        np.testing.assert_array_equal(grid[:, 2:], model.field(grid[:, :2]))
        box = symmetric_box(oscillator.portrait_box)
        assert grid[0, 0] == box.lower[0]
        assert grid[-1, 1] == box.upper[1]

    def test_symmetric_box(self, oscillator):
        box = symmetric_box(oscillator.portrait_box)
        assert box.lower[0] == -box.upper[0]
        assert box.upper == oscillator.portrait_box.upper

    def test_custom_region(self, oscillator, oscillator_models):
        model = oscillator_models[KernelFamily.SEPARABLE_GAUSSIAN]
        region = Box(lower=(0.0, 0.0), upper=(0.5, 0.5))
        report = EvaluationAggregator(oscillator, region=region, samples=200, seed=3).evaluate(model)
        assert report.odd_error == odd_error_stats(model.field, region, 200, 3)

    def test_rollout_times_must_increase(self):
        stats = {"mean": 0.0, "variance": 0.0, "samples": 1}
        with pytest.raises(ValueError):
            EvaluationReport(
                system="oscillator", family="oddsymplectic", seed=0, odd_error=stats,
                rollout=[(0.0, 0.0), (0.0, 1.0)],
            )
