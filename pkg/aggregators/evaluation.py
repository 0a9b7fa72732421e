"""評価指標の集計モジュール"""
import logging
from typing import Callable, Optional, Tuple

import numpy as np
import pandas as pd

from core.config import settings
from core.errors import ContractViolationError, DimensionMismatchError, InvalidParameterError
from models.domain import TrainedModel
from models.schemas import Box, EvaluationReport, HamiltonianStats, OddErrorStats

logger = logging.getLogger(__name__)

VectorField = Callable[[np.ndarray], np.ndarray]


def odd_error_stats(
    field: VectorField,
    region: Box,
    samples: Optional[int] = None,
    seed: int = 0,
) -> OddErrorStats:
    """
    奇関数誤差 e_odd = ‖f(x) + f(-x)‖ の平均と分散

    Args:
        field: 点列 (M, n) を受け付けるベクトル場
        region: サンプリング領域（位相図の右半平面）
        samples: サンプル数（省略時は settings.odd_error_samples）
        seed: 乱数シード

    Returns:
        OddErrorStats
    """
    samples = settings.odd_error_samples if samples is None else samples
    if samples < 1:
        raise InvalidParameterError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    lower = np.asarray(region.lower, dtype=float)
    upper = np.asarray(region.upper, dtype=float)
    X = rng.uniform(lower, upper, size=(samples, region.dim))
    e = np.linalg.norm(field(X) + field(-X), axis=1)
    return OddErrorStats(mean=float(np.mean(e)), variance=float(np.var(e)), samples=samples)


def hamiltonian_stats(model: TrainedModel, trajectory, true_system=None, true_trajectory=None) -> HamiltonianStats:
    """
    軌道上で学習したハミルトニアン Ĥ を評価

    Args:
        model: シンプレクティック系カーネルの学習済みモデル
        trajectory: (M, n) の軌道点
        true_system: 真の系（与えた場合はオフセット mean(Ĥ) - mean(H) も計算）
        true_trajectory: 真の H を評価する軌道（省略時は trajectory）

    Returns:
        HamiltonianStats
    """
    if not model.family.is_symplectic:
        raise ContractViolationError(
            f"Hamiltonian statistics require a symplectic kernel, got {model.family.value}"
        )
    states = np.asarray(trajectory, dtype=float)
    H_hat = np.atleast_1d(model.hamiltonian(states))
    stats = {"mean": float(np.mean(H_hat)), "variance": float(np.var(H_hat))}
    if true_system is not None:
        true_states = states if true_trajectory is None else np.asarray(true_trajectory, dtype=float)
        H_true = np.atleast_1d(true_system.hamiltonian(true_states))
        stats["true_mean"] = float(np.mean(H_true))
        stats["true_variance"] = float(np.var(H_true))
        stats["offset"] = stats["mean"] - stats["true_mean"]
    return HamiltonianStats(**stats)


def field_grid(field: VectorField, box: Box, nx: int, ny: int) -> pd.DataFrame:
    """
    矩形領域上でベクトル場をサンプリング（位相図用）

    x1 が速く変わる行優先の順で nx·ny 行を返す。

    Returns:
        列 x1, x2, f1, f2 の DataFrame
    """
    if nx < 2 or ny < 2:
        raise InvalidParameterError("nx and ny must be >= 2")
    if box.dim != 2:
        raise DimensionMismatchError(2, box.dim, what="box")
    xs = np.linspace(box.lower[0], box.upper[0], nx)
    ys = np.linspace(box.lower[1], box.upper[1], ny)
    X1, X2 = np.meshgrid(xs, ys, indexing="xy")
    points = np.column_stack([X1.ravel(), X2.ravel()])
    F = np.asarray(field(points), dtype=float)
    if F.shape != points.shape:
        raise DimensionMismatchError(2, F.shape, what="field output")
    return pd.DataFrame({"x1": points[:, 0], "x2": points[:, 1], "f1": F[:, 0], "f2": F[:, 1]})


def symmetric_box(portrait_box: Box) -> Box:
    """位相図の右半平面を原点対称に広げた領域"""
    return Box(
        lower=(-portrait_box.upper[0], portrait_box.lower[1]),
        upper=(portrait_box.upper[0], portrait_box.upper[1]),
    )


class EvaluationAggregator:
    """学習モデル1つ分の評価をまとめて計算"""

    def __init__(
        self,
        true_system,
        region: Optional[Box] = None,
        samples: Optional[int] = None,
        seed: int = 0,
        field_box: Optional[Box] = None,
        field_shape: Tuple[int, int] = (21, 21),
    ):
        """
        初期化

        Args:
            true_system: 比較対象の真の系
            region: 奇関数誤差のサンプリング領域（省略時は系の位相図の右半平面）
            samples: 奇関数誤差のサンプル数
            seed: 乱数シード
            field_box: 位相図用の格子の範囲（省略時は位相図を原点対称に広げた領域）
            field_shape: 格子の点数 (nx, ny)
        """
        self.true_system = true_system
        self.region = region or true_system.portrait_box
        self.samples = samples
        self.seed = seed
        self.field_box = field_box or symmetric_box(true_system.portrait_box)
        self.field_shape = field_shape

    def evaluate(
        self,
        model: TrainedModel,
        rollout=None,
        defect: Optional[float] = None,
    ) -> EvaluationReport:
        """
        奇関数誤差・ハミルトニアン・ロールアウト誤差・位相図の格子をまとめる

        Args:
            model: 学習済みモデル
            rollout: rollout_error の結果（ハミルトニアンは学習モデル側の軌道で評価）
            defect: シンプレクティック条件からのずれ
        """
        odd = odd_error_stats(model.field, self.region, self.samples, self.seed)
        true_odd = odd_error_stats(self.true_system.field, self.region, self.samples, self.seed)

        hamiltonian = None
        if model.family.is_symplectic and rollout is not None:
            hamiltonian = hamiltonian_stats(
                model, rollout.learned.states, self.true_system, rollout.true.states
            )

        grid = []
        if self.field_box.dim == 2:
            frame = field_grid(model.field, self.field_box, *self.field_shape)
            grid = list(frame.itertuples(index=False, name=None))

        logger.info(
            "%s model: e_odd mean=%.3e variance=%.3e", model.family.value, odd.mean, odd.variance
        )
        return EvaluationReport(
            system=self.true_system.name,
            family=model.family,
            seed=model.meta.seed if model.meta is not None else self.seed,
            odd_error=odd,
            true_odd_error=true_odd,
            hamiltonian=hamiltonian,
            rollout=rollout.as_pairs() if rollout is not None else [],
            field_grid=grid,
            symplecticity_defect=defect,
        )
