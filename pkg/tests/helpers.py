"""
テスト用のデータセット・モデル作成ヘルパー
"""
import numpy as np

from analyzers.regression import solve_coefficients
from collectors.simulator import make_dataset
from commands.schemas import recipe
from models.schemas import KernelFamily, KernelSpec

# 報告されている (σ, λ)
REPORTED_HYPERPARAMETERS = {
    "oscillator": {
        KernelFamily.SEPARABLE_GAUSSIAN: (19.5, 1e-4),
        KernelFamily.ODD_SYMPLECTIC: (12.1, 1e-4),
    },
    "pendulum": {
        KernelFamily.SEPARABLE_GAUSSIAN: (12.3, 0.1),
        KernelFamily.ODD_SYMPLECTIC: (3.0, 1e-4),
    },
}


def recipe_dataset(name: str, seed: int = 0):
    config = recipe(name, seed=seed)
    return make_dataset(config.build_system(), config.ics, config.trajectory_spec(), config.noise_spec())


def train(dataset, family, sigma: float, lam: float):
    spec = KernelSpec(family=family, sigma=sigma, dim=dataset.dim)
    return solve_coefficients(dataset, spec, lam)


def train_reported_model(dataset, name: str, family: KernelFamily):
    sigma, lam = REPORTED_HYPERPARAMETERS[name][family]
    return train(dataset, family, sigma, lam)


def fd_gradient(fn, x: np.ndarray, h: float) -> np.ndarray:
    """中心差分によるスカラー関数の勾配"""
    grad = np.zeros_like(x, dtype=float)
    for i in range(x.shape[0]):
        e = np.zeros_like(x, dtype=float)
        e[i] = h
        grad[i] = (fn(x + e) - fn(x - e)) / (2 * h)
    return grad


def fd_hessian(fn, x: np.ndarray, h: float) -> np.ndarray:
    """中心差分によるスカラー関数のヘッセ行列"""
    n = x.shape[0]
    H = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            ei = np.zeros(n)
            ej = np.zeros(n)
            ei[i] = h
            ej[j] = h
            H[i, j] = (
                fn(x + ei + ej) - fn(x + ei - ej) - fn(x - ei + ej) + fn(x - ei - ej)
            ) / (4 * h * h)
    return H


def relative_error(actual, expected, floor: float = 0.0) -> float:
    actual = np.asarray(actual, dtype=float)
    expected = np.asarray(expected, dtype=float)
    return float(np.linalg.norm(actual - expected) / max(np.linalg.norm(expected), floor))
