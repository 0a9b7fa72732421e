"""
Pydantic Schemas for CLI experiment recipes
"""
import math
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from analyzers.tuner import DEFAULT_LAMBDAS, DEFAULT_SIGMAS
from collectors.systems import HamiltonianSystem, build_system
from core.config import settings
from core.errors import InvalidParameterError
from models.schemas import GridSpec, Integrator, KernelFamily, KernelSpec, NoiseSpec, TrajectorySpec


# ========== Experiment Schemas ==========

class ExperimentConfig(BaseModel):
    """
    実験レシピ（設定ファイルと CLI フラグの共通形式）

    設定ファイルは同じキーを持つ JSON。フラグで指定した値がファイルの値を上書きする。
    """
    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    system: str = "oscillator"
    params: Dict[str, float] = Field(default_factory=dict)
    ics: List[Tuple[float, ...]] = Field(default_factory=list)
    dt: float = Field(0.25, gt=0, description="学習データの時間刻み [s]")
    t_end: float = Field(1.0, gt=0, description="学習データの終端時刻 [s]")
    integrator: Integrator = Integrator.RK4
    noise_std: float = Field(0.0, ge=0)
    seed: int = Field(settings.default_seed, ge=0)

    kernel: KernelFamily = KernelFamily.ODD_SYMPLECTIC
    sigma: Optional[float] = Field(None, gt=0)
    lam: Optional[float] = Field(None, gt=0, alias="lambda")
    folds: int = Field(settings.default_folds, ge=2)
    grid_sigma: Optional[List[float]] = None
    grid_lambda: Optional[List[float]] = None

    x0: Optional[Tuple[float, ...]] = None
    test_t_end: Optional[float] = Field(None, gt=0)
    test_dt: float = Field(settings.test_dt, gt=0)

    out: Optional[Path] = None

    @field_validator("kernel", mode="before")
    @classmethod
    def _parse_kernel(cls, v):
        return KernelFamily.parse(v)

    @field_validator("ics")
    @classmethod
    def _finite_ics(cls, v: List[Tuple[float, ...]]) -> List[Tuple[float, ...]]:
        for ic in v:
            if not all(math.isfinite(c) for c in ic):
                raise ValueError("initial conditions must be finite")
        return v

    @model_validator(mode="after")
    def _consistent_dimensions(self):
        dims = {len(ic) for ic in self.ics}
        if len(dims) > 1:
            raise ValueError("all initial conditions must have the same dimension")
        if dims and self.x0 is not None and len(self.x0) not in dims:
            raise ValueError("x0 must have the same dimension as the initial conditions")
        if self.t_end < self.dt * (1 - 1e-12):
            raise ValueError("t_end must be >= dt")
        return self

    def build_system(self) -> HamiltonianSystem:
        return build_system(self.system, self.params)

    def trajectory_spec(self) -> TrajectorySpec:
        """学習データ用の軌道仕様（x0 は各初期条件で置き換える）"""
        x0 = self.ics[0] if self.ics else (0.0, 0.0)
        return TrajectorySpec(x0=x0, h=self.dt, t_end=self.t_end, integrator=self.integrator)

    def noise_spec(self) -> NoiseSpec:
        return NoiseSpec(std=self.noise_std, seed=self.seed)

    def kernel_spec(self, dim: int = 2, family: Optional[KernelFamily] = None) -> KernelSpec:
        if self.sigma is None:
            raise InvalidParameterError("sigma is required (use --sigma or run tune first)")
        return KernelSpec(family=family or self.kernel, sigma=self.sigma, dim=dim)

    def grid_spec(self) -> GridSpec:
        return GridSpec(
            sigmas=tuple(self.grid_sigma or DEFAULT_SIGMAS),
            lambdas=tuple(self.grid_lambda or DEFAULT_LAMBDAS),
            folds=self.folds,
            seed=self.seed,
        )


# 報告されている2つの実験の設定
RECIPES: Dict[str, Dict] = {
    "oscillator": {
        "system": "oscillator",
        "params": {"m": 0.5, "k": 1.0},
        "ics": [(1.0, 0.0), (2.25, 0.0), (3.5, 0.0)],
        "dt": 0.25,
        "t_end": 1.0,
        "noise_std": 0.1,
        "x0": (2.0, 0.0),
        "test_t_end": 4.0,
    },
    "pendulum": {
        "system": "pendulum",
        "params": {"m": 0.5, "l": 1.0, "g": 9.81},
        "ics": [(2 * math.pi / 5, 0.0), (4 * math.pi / 5, 0.0), (19 * math.pi / 20, -4.0)],
        "dt": 0.1,
        "t_end": 0.7,
        "noise_std": 0.01,
        "x0": (math.pi / 2, 0.0),
        "test_t_end": 2.0,
    },
}


def recipe(name: str, **overrides) -> ExperimentConfig:
    """名前付きレシピから設定を作成"""
    if name not in RECIPES:
        raise InvalidParameterError(f"unknown experiment: {name} (choose from {', '.join(RECIPES)})")
    return ExperimentConfig(**{**RECIPES[name], **overrides})
