"""
固定刻みの数値積分と学習データの生成

- integrate: RK4 / オイラー法による軌道
- make_dataset: 真の系の軌道から (x_i, y_i) を作り、ガウスノイズを加える
- rollout_error: 真の系と学習モデルの軌道の誤差
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence

import numpy as np

from core.errors import IntegrationError, InvalidParameterError
from models.domain import Dataset, Trajectory
from models.schemas import DatasetMeta, Integrator, NoiseSpec, TrajectorySpec
from .systems import HamiltonianSystem

logger = logging.getLogger(__name__)

VectorField = Callable[[np.ndarray], np.ndarray]


def rk4_step(field: VectorField, x: np.ndarray, h: float) -> np.ndarray:
    """古典的4次ルンゲ・クッタ法の1ステップ"""
    k1 = field(x)
    k2 = field(x + 0.5 * h * k1)
    k3 = field(x + 0.5 * h * k2)
    k4 = field(x + h * k3)
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def euler_step(field: VectorField, x: np.ndarray, h: float) -> np.ndarray:
    """前進オイラー法の1ステップ（診断用）"""
    return x + h * field(x)


STEPPERS: Dict[Integrator, Callable[[VectorField, np.ndarray, float], np.ndarray]] = {
    Integrator.RK4: rk4_step,
    Integrator.EULER: euler_step,
}


def integrate(field: VectorField, spec: TrajectorySpec, truncate_on_failure: bool = False) -> Trajectory:
    """
    固定刻みで軌道を積分

    Args:
        field: ベクトル場 x -> ẋ
        spec: 初期点・刻み・終端時刻・積分法
        truncate_on_failure: 非有限な状態が出たら例外ではなくそこで打ち切る

    Returns:
        t = 0 を含む floor(t_end / h) + 1 点の軌道

    Raises:
        IntegrationError: 非有限な状態（ステップ番号付き）
    """
    step = STEPPERS[spec.integrator]
    n_steps = spec.n_steps
    x = np.asarray(spec.x0, dtype=float)
    if not np.all(np.isfinite(x)):
        raise IntegrationError(0, "non-finite initial state")

    states = np.empty((n_steps + 1, x.shape[0]))
    states[0] = x
    for i in range(1, n_steps + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            x = np.asarray(step(field, x, spec.h), dtype=float)
        if not np.all(np.isfinite(x)):
            if truncate_on_failure:
                logger.warning("trajectory diverged at step %d; truncating", i)
                return Trajectory(spec.h * np.arange(i), states[:i])
            raise IntegrationError(i)
        states[i] = x
    return Trajectory(spec.h * np.arange(n_steps + 1), states)


def make_dataset(
    system: HamiltonianSystem,
    ics: Sequence[Sequence[float]],
    spec: TrajectorySpec,
    noise: NoiseSpec,
) -> Dataset:
    """
    真の系の軌道から学習データを作成

    y_i はノイズのない軌道点で真のベクトル場を評価した値。
    その後 x_i, y_i の両方に N(0, σ_n²) のノイズを加える。
    乱数は (seed, 軌道番号) から軌道ごとに生成する。

    Args:
        system: 真の系
        ics: 初期条件のリスト
        spec: 刻み・終端時刻・積分法（x0 は各初期条件で置き換える）
        noise: ノイズ仕様

    Returns:
        全軌道を連結したデータセット
    """
    if len(ics) == 0:
        raise InvalidParameterError("at least one initial condition is required")

    points: List[np.ndarray] = []
    derivatives: List[np.ndarray] = []
    for index, ic in enumerate(ics):
        trajectory = integrate(system.field, spec.model_copy(update={"x0": tuple(float(v) for v in ic)}))
        clean = trajectory.states
        X = clean.copy()
        Y = system.field(clean)
        if noise.std > 0:
            rng = np.random.default_rng([noise.seed, index])
            X = X + rng.normal(0.0, noise.std, size=X.shape)
            Y = Y + rng.normal(0.0, noise.std, size=Y.shape)
        points.append(X)
        derivatives.append(Y)

    meta = DatasetMeta(
        system=system.name,
        params=dict(system.params),
        ics=[[float(v) for v in ic] for ic in ics],
        h=spec.h,
        t_end=spec.t_end,
        noise_std=noise.std,
        seed=noise.seed,
        integrator=spec.integrator,
    )
    dataset = Dataset(np.vstack(points), np.vstack(derivatives), meta)
    logger.info(
        "generated %s dataset: %d trajectories, N=%d, noise std=%g",
        system.name, len(ics), dataset.n_samples, noise.std,
    )
    return dataset


@dataclass(frozen=True, eq=False)
class RolloutResult:
    """真の系と学習モデルの軌道、および各時刻の誤差 ‖x_b - x_l‖"""
    true: Trajectory
    learned: Trajectory

    @property
    def times(self) -> np.ndarray:
        return self.learned.times

    @property
    def errors(self) -> np.ndarray:
        return np.linalg.norm(self.true.states - self.learned.states, axis=1)

    def as_pairs(self) -> List[tuple]:
        return [(float(t), float(e)) for t, e in zip(self.times, self.errors)]

    @property
    def mean_error(self) -> float:
        return float(np.mean(self.errors))


def rollout_error(
    true_system: VectorField,
    model: VectorField,
    x0,
    h: float,
    t_end: float,
    integrator: Integrator = Integrator.RK4,
) -> RolloutResult:
    """
    同じ初期点・積分法で真の系と学習モデルを積分し、点ごとの誤差を計算

    どちらかが発散した場合は警告を出し、その時点で系列を打ち切る。
    """
    spec = TrajectorySpec(x0=tuple(float(v) for v in x0), h=h, t_end=t_end, integrator=integrator)
    true_traj = integrate(true_system, spec, truncate_on_failure=True)
    learned_traj = integrate(model, spec, truncate_on_failure=True)
    length = min(len(true_traj), len(learned_traj))
    if length < spec.n_steps + 1:
        logger.warning("rollout truncated to %d of %d points", length, spec.n_steps + 1)
    return RolloutResult(true_traj.truncate(length), learned_traj.truncate(length))
