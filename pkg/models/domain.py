"""
配列を保持するドメインオブジェクト
Dataset / Trajectory / TrainedModel はいずれも生成後に変更しない
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.errors import DimensionMismatchError, InvalidParameterError
from .schemas import DatasetMeta, KernelSpec


def _frozen_array(values, ndim: int, what: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise InvalidParameterError(f"{what} must be a {ndim}-d array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    学習データ {(x_i, y_i)}

    points: (N, n) 状態
    derivatives: (N, n) 状態の時間微分
    """
    points: np.ndarray
    derivatives: np.ndarray
    meta: Optional[DatasetMeta] = None

    def __post_init__(self):
        points = _frozen_array(self.points, 2, "points")
        derivatives = _frozen_array(self.derivatives, 2, "derivatives")
        if points.shape[0] < 1:
            raise InvalidParameterError("dataset must contain at least one sample")
        if points.shape != derivatives.shape:
            raise DimensionMismatchError(points.shape[1], derivatives.shape, what="derivatives")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "derivatives", derivatives)

    @property
    def n_samples(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def subset(self, indices) -> "Dataset":
        """指定インデックスのサンプルだけを持つデータセット"""
        idx = np.asarray(indices, dtype=int)
        return Dataset(self.points[idx], self.derivatives[idx], self.meta)

    def with_derivatives(self, derivatives) -> "Dataset":
        return Dataset(self.points, derivatives, self.meta)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """固定刻みの軌道（t = 0 を含む）"""
    times: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        times = _frozen_array(self.times, 1, "times")
        states = _frozen_array(self.states, 2, "states")
        if times.shape[0] != states.shape[0]:
            raise InvalidParameterError("times and states must have the same length")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    def __len__(self) -> int:
        return self.times.shape[0]

    def truncate(self, length: int) -> "Trajectory":
        return Trajectory(self.times[:length], self.states[:length])


@dataclass(frozen=True, eq=False)
class TrainedModel:
    """
    学習済みベクトル場 f*(x) = Σ K(x, x_i) a_i

    spec: カーネル仕様
    lam: 正則化パラメータ λ
    centers: (N, n) 学習点 x_i
    coeffs: (N, n) 係数 a_i
    """
    spec: KernelSpec
    lam: float
    centers: np.ndarray
    coeffs: np.ndarray
    meta: Optional[DatasetMeta] = None
    jitter: float = 0.0

    def __post_init__(self):
        if not self.lam > 0:
            raise InvalidParameterError(f"lambda must be positive, got {self.lam}")
        centers = _frozen_array(self.centers, 2, "centers")
        coeffs = _frozen_array(self.coeffs, 2, "coeffs")
        if centers.shape != coeffs.shape:
            raise DimensionMismatchError(centers.shape[1], coeffs.shape, what="coeffs")
        if centers.shape[1] != self.spec.dim:
            raise DimensionMismatchError(self.spec.dim, centers.shape[1], what="centers")
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def n_samples(self) -> int:
        return self.centers.shape[0]

    @property
    def dim(self) -> int:
        return self.spec.dim

    @property
    def family(self):
        return self.spec.family

    def field(self, x) -> np.ndarray:
        """学習したベクトル場 f*(x)"""
        from analyzers.regression import evaluate_field
        return evaluate_field(self, x)

    def hamiltonian(self, x):
        """学習したハミルトニアン Ĥ(x)（シンプレクティック系カーネルのみ）"""
        from analyzers.regression import evaluate_hamiltonian
        return evaluate_hamiltonian(self, x)

    def rkhs_norm(self) -> float:
        """‖f*‖_ℋ = √(aᵀ G a)"""
        from analyzers.regression import rkhs_norm
        return rkhs_norm(self)

    def __call__(self, x) -> np.ndarray:
        return self.field(x)
