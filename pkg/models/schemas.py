"""
Pydantic スキーマ
カーネル・軌道・ノイズ・グリッドの仕様と評価結果
"""
import math
from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


# ========== Kernel Schemas ==========

class KernelFamily(str, Enum):
    """行列値カーネルの種類（モデルファイルには小文字で保存）"""
    SEPARABLE_GAUSSIAN = "separablegaussian"
    CURL_FREE = "curlfree"
    ODD_CURL_FREE = "oddcurlfree"
    EVEN_CURL_FREE = "evencurlfree"
    SYMPLECTIC = "symplectic"
    ODD_SYMPLECTIC = "oddsymplectic"
    EVEN_SYMPLECTIC = "evensymplectic"

    @classmethod
    def parse(cls, value: "str | KernelFamily") -> "KernelFamily":
        """大文字小文字・区切り文字を無視して解釈"""
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("-", "").replace("_", "").replace(" ", "")
        return cls(key)

    @property
    def is_symplectic(self) -> bool:
        return self in SYMPLECTIC_FAMILIES

    @property
    def is_curl_free(self) -> bool:
        return self in CURL_FREE_FAMILIES


SYMPLECTIC_FAMILIES = frozenset({
    KernelFamily.SYMPLECTIC,
    KernelFamily.ODD_SYMPLECTIC,
    KernelFamily.EVEN_SYMPLECTIC,
})
CURL_FREE_FAMILIES = frozenset({
    KernelFamily.CURL_FREE,
    KernelFamily.ODD_CURL_FREE,
    KernelFamily.EVEN_CURL_FREE,
})


class KernelSpec(BaseModel):
    """カーネルの種類と幅σ、位相空間の次元"""
    model_config = ConfigDict(frozen=True)

    family: KernelFamily
    sigma: float = Field(..., gt=0, description="カーネル幅 σ")
    dim: int = Field(2, ge=2, description="位相空間の次元 n = 2m")

    @field_validator("family", mode="before")
    @classmethod
    def _parse_family(cls, v):
        return KernelFamily.parse(v)

    @field_validator("sigma")
    @classmethod
    def _finite_sigma(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("sigma must be finite")
        return v

    @field_validator("dim")
    @classmethod
    def _even_dim(cls, v: int) -> int:
        if v % 2 != 0:
            raise ValueError("dim must be even")
        return v

    def with_sigma(self, sigma: float) -> "KernelSpec":
        return KernelSpec(family=self.family, sigma=sigma, dim=self.dim)


# ========== Simulation Schemas ==========

class Integrator(str, Enum):
    RK4 = "rk4"
    EULER = "euler"


class TrajectorySpec(BaseModel):
    """固定刻みの軌道仕様"""
    model_config = ConfigDict(frozen=True)

    x0: Tuple[float, ...]
    h: float = Field(..., gt=0, description="時間刻み [s]")
    t_end: float = Field(..., gt=0, description="終端時刻 [s]")
    integrator: Integrator = Integrator.RK4

    @model_validator(mode="after")
    def _horizon_covers_one_step(self):
        # 丸め誤差で t_end = h がはじかれないように許容幅を持たせる
        if self.t_end < self.h * (1 - 1e-12):
            raise ValueError("t_end must be >= h")
        return self

    @property
    def n_steps(self) -> int:
        """ステップ数 floor(t_end / h)"""
        return int(math.floor(self.t_end / self.h + 1e-9))


class NoiseSpec(BaseModel):
    """加法的ガウスノイズ"""
    model_config = ConfigDict(frozen=True)

    std: float = Field(0.0, ge=0, description="ノイズ標準偏差 σ_n")
    seed: int = Field(0, ge=0)


class DatasetMeta(BaseModel):
    """データセットの由来"""
    system: str
    params: Dict[str, float] = Field(default_factory=dict)
    ics: List[List[float]] = Field(default_factory=list)
    h: Optional[float] = None
    t_end: Optional[float] = None
    noise_std: float = 0.0
    seed: int = 0
    integrator: Integrator = Integrator.RK4


# ========== Tuning Schemas ==========

class GridSpec(BaseModel):
    """(σ, λ) のグリッドと交差検証の設定"""
    model_config = ConfigDict(frozen=True)

    sigmas: Tuple[float, ...]
    lambdas: Tuple[float, ...]
    folds: int = Field(5, ge=2)
    seed: int = Field(0, ge=0)

    @field_validator("sigmas", "lambdas")
    @classmethod
    def _ascending_positive(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        if not v:
            raise ValueError("grid list must be nonempty")
        if any(not (x > 0 and math.isfinite(x)) for x in v):
            raise ValueError("grid values must be positive and finite")
        return tuple(sorted(v))


# ========== Evaluation Schemas ==========

class Box(BaseModel):
    """軸に平行な矩形領域"""
    model_config = ConfigDict(frozen=True)

    lower: Tuple[float, ...]
    upper: Tuple[float, ...]

    @model_validator(mode="after")
    def _ordered(self):
        if len(self.lower) != len(self.upper):
            raise ValueError("lower and upper must have the same dimension")
        if any(lo > up for lo, up in zip(self.lower, self.upper)):
            raise ValueError("lower bound exceeds upper bound")
        return self

    @property
    def dim(self) -> int:
        return len(self.lower)

    @classmethod
    def from_string(cls, text: str) -> "Box":
        """'x1min,x1max,x2min,x2max' 形式から生成"""
        values = [float(v) for v in text.split(",")]
        if len(values) % 2 != 0:
            raise ValueError(f"box needs min,max pairs: {text!r}")
        return cls(lower=tuple(values[0::2]), upper=tuple(values[1::2]))


class OddErrorStats(BaseModel):
    """奇関数誤差 e_odd = ‖f(x) + f(−x)‖ の統計"""
    mean: float
    variance: float = Field(..., ge=0)
    samples: int


class HamiltonianStats(BaseModel):
    """軌道上のハミルトニアンの統計"""
    mean: float
    variance: float = Field(..., ge=0)
    true_mean: Optional[float] = None
    true_variance: Optional[float] = None
    offset: Optional[float] = None


class GridSearchResult(BaseModel):
    """グリッドサーチの結果（スコア表は行のリストで保持）"""
    family: KernelFamily
    sigma: float
    lam: float
    score: float
    table: List[Dict[str, float]]


class EvaluationReport(BaseModel):
    """学習モデルの評価結果一式"""
    system: str
    family: KernelFamily
    seed: int
    odd_error: OddErrorStats
    true_odd_error: Optional[OddErrorStats] = None
    hamiltonian: Optional[HamiltonianStats] = None
    rollout: List[Tuple[float, float]] = Field(default_factory=list)
    field_grid: List[Tuple[float, float, float, float]] = Field(default_factory=list)
    symplecticity_defect: Optional[float] = None

    @field_validator("family", mode="before")
    @classmethod
    def _parse_family(cls, v):
        return KernelFamily.parse(v)

    @field_validator("rollout")
    @classmethod
    def _increasing_times(cls, v: List[Tuple[float, float]]) -> List[Tuple[float, float]]:
        times = [t for t, _ in v]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("rollout times must be strictly increasing")
        return v

    @property
    def rollout_mean_error(self) -> Optional[float]:
        if not self.rollout:
            return None
        return sum(err for _, err in self.rollout) / len(self.rollout)

    @property
    def rollout_max_error(self) -> Optional[float]:
        if not self.rollout:
            return None
        return max(err for _, err in self.rollout)
