"""真のハミルトン系（調和振動子・単振り子）"""
import math
from abc import ABC, abstractmethod
from typing import Callable, Dict, Optional, Type

import numpy as np

from core.config import settings
from core.errors import DimensionMismatchError, InvalidParameterError
from core.symplectic import symplectic_matrix
from models.schemas import Box, Integrator, TrajectorySpec


class HamiltonianSystem(ABC):
    """
    状態 x = [q, p] の1自由度ハミルトン系

    field / hamiltonian は点 (2,) と点列 (M, 2) の両方を受け付ける。
    """

    name: str = ""
    dim: int = 2
    default_params: Dict[str, float] = {}
    # 位相図の右半平面（奇関数誤差のサンプリング領域）
    portrait_box: Box = Box(lower=(0.0, -1.0), upper=(1.0, 1.0))

    def __init__(self, **params: float):
        """
        初期化

        Args:
            **params: 物理パラメータ（省略したものは既定値）
        """
        unknown = set(params) - set(self.default_params)
        if unknown:
            raise InvalidParameterError(
                f"unknown parameter(s) for {self.name}: {', '.join(sorted(unknown))}"
            )
        merged = {**self.default_params, **{k: float(v) for k, v in params.items()}}
        for key, value in merged.items():
            if not (value > 0 and math.isfinite(value)):
                raise InvalidParameterError(f"{self.name} parameter {key} must be positive, got {value}")
        self.params = merged

    def _split(self, x) -> tuple[np.ndarray, np.ndarray]:
        arr = np.asarray(x, dtype=float)
        if arr.shape[-1] != self.dim:
            raise DimensionMismatchError(self.dim, arr.shape, what="state")
        return arr[..., 0], arr[..., 1]

    @abstractmethod
    def field(self, x) -> np.ndarray:
        """ハミルトンの運動方程式 (q̇, ṗ)"""

    @abstractmethod
    def hamiltonian(self, x):
        """全エネルギー H(q, p)"""

    def __call__(self, x) -> np.ndarray:
        return self.field(x)

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"{type(self).__name__}({args})"


class HarmonicOscillator(HamiltonianSystem):
    """減衰のないばね・質点系 H = p²/2m + k q²/2"""

    name = "oscillator"
    default_params = {"m": 0.5, "k": 1.0}
    portrait_box = Box(lower=(0.0, -4.0), upper=(4.0, 4.0))

    def field(self, x) -> np.ndarray:
        q, p = self._split(x)
        m, k = self.params["m"], self.params["k"]
        return np.stack([p / m, -k * q], axis=-1)

    def hamiltonian(self, x):
        q, p = self._split(x)
        m, k = self.params["m"], self.params["k"]
        H = 0.5 * p ** 2 / m + 0.5 * k * q ** 2
        return float(H) if np.ndim(H) == 0 else H

    def angular_frequency(self) -> float:
        return math.sqrt(self.params["k"] / self.params["m"])


class SimplePendulum(HamiltonianSystem):
    """単振り子 H = p²/(2 m l²) + m g l (1 - cos q)、吊り下がった状態でポテンシャル0"""

    name = "pendulum"
    default_params = {"m": 0.5, "l": 1.0, "g": 9.81}
    portrait_box = Box(lower=(0.0, -8.0), upper=(math.pi, 8.0))

    def field(self, x) -> np.ndarray:
        q, p = self._split(x)
        m, l, g = self.params["m"], self.params["l"], self.params["g"]
        return np.stack([p / (m * l ** 2), -m * g * l * np.sin(q)], axis=-1)

    def hamiltonian(self, x):
        q, p = self._split(x)
        m, l, g = self.params["m"], self.params["l"], self.params["g"]
        H = p ** 2 / (2 * m * l ** 2) + m * g * l * (1 - np.cos(q))
        return float(H) if np.ndim(H) == 0 else H


SYSTEMS: Dict[str, Type[HamiltonianSystem]] = {
    "oscillator": HarmonicOscillator,
    "harmonicoscillator": HarmonicOscillator,
    "pendulum": SimplePendulum,
    "simplependulum": SimplePendulum,
}


def build_system(name: str, params: Optional[Dict[str, float]] = None) -> HamiltonianSystem:
    """
    名前とパラメータから系を生成

    Args:
        name: "oscillator" / "pendulum"（"HarmonicOscillator" なども可）
        params: 物理パラメータ

    Returns:
        HamiltonianSystem
    """
    key = name.lower().replace("_", "").replace("-", "").replace(" ", "")
    if key not in SYSTEMS:
        raise InvalidParameterError(f"unknown system: {name}")
    return SYSTEMS[key](**(params or {}))


def true_field(system: HamiltonianSystem, x) -> np.ndarray:
    return system.field(x)


def true_hamiltonian(system: HamiltonianSystem, x):
    return system.hamiltonian(x)


def flow_jacobian(
    field: Callable,
    x0,
    t: float,
    h: float,
    eps: Optional[float] = None,
    integrator: Integrator = Integrator.RK4,
) -> np.ndarray:
    """
    フロー φ_t の x0 でのヤコビアン Ψ を中心差分で計算

    差分は変位 φ_t(y) - y に対して取るので、零ベクトル場では Ψ = I が厳密に得られる。
    """
    from .simulator import integrate

    eps = settings.fd_perturbation if eps is None else eps
    x0 = np.asarray(x0, dtype=float)
    n = x0.shape[0]

    def displacement(y: np.ndarray) -> np.ndarray:
        spec = TrajectorySpec(x0=tuple(y), h=h, t_end=t, integrator=integrator)
        return integrate(field, spec).states[-1] - y

    Psi = np.eye(n)
    for j in range(n):
        e = np.zeros(n)
        e[j] = eps
        Psi[:, j] += (displacement(x0 + e) - displacement(x0 - e)) / (2 * eps)
    return Psi


def symplecticity_defect(
    field: Callable,
    x0,
    t: float,
    h: float,
    eps: Optional[float] = None,
    integrator: Integrator = Integrator.RK4,
) -> float:
    """
    シンプレクティック条件 ΨᵀJΨ = J からのずれ

    Args:
        field: ベクトル場
        x0: 初期点
        t: 積分時間
        h: 時間刻み
        eps: 差分の摂動幅（省略時は settings.fd_perturbation）

    Returns:
        ‖ΨᵀJΨ - J‖ (フロベニウスノルム)
    """
    if not (t > 0 and h > 0):
        raise InvalidParameterError("t and h must be positive")
    Psi = flow_jacobian(field, x0, t, h, eps, integrator)
    J = symplectic_matrix(Psi.shape[0])
    return float(np.linalg.norm(Psi.T @ J @ Psi - J, ord="fro"))
