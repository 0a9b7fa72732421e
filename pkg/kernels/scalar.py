"""
スカラーのガウスカーネル

k_σ(x, z) = exp(-‖x - z‖² / 2σ²) と、その奇関数版・偶関数版、および x に関する勾配。
配列の最後の軸を状態の軸として扱い、それ以外の軸はブロードキャストする。
"""
import numpy as np

from core.errors import DimensionMismatchError, InvalidParameterError


def check_sigma(sigma: float) -> float:
    """カーネル幅 σ > 0 を検証"""
    sigma = float(sigma)
    if not (sigma > 0 and np.isfinite(sigma)):
        raise InvalidParameterError(f"sigma must be positive and finite, got {sigma}")
    return sigma


def as_point(x, dim: int | None = None, what: str = "x") -> np.ndarray:
    """1次元の状態ベクトルに変換し、次元を検証"""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise DimensionMismatchError(dim if dim is not None else -1, arr.shape, what=what)
    if dim is not None and arr.shape[0] != dim:
        raise DimensionMismatchError(dim, arr.shape[0], what=what)
    return arr


def check_pair(x, z, dim: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """x, z を同じ次元の点として検証"""
    x = as_point(x, dim, "x")
    z = as_point(z, x.shape[0], "z")
    return x, z


def gaussian_profile(r: np.ndarray, sigma: float) -> np.ndarray:
    """g_σ(r) = exp(-rᵀr / 2σ²)"""
    return np.exp(-np.sum(r * r, axis=-1) / (2.0 * sigma ** 2))


def gaussian_profile_gradient(r: np.ndarray, sigma: float) -> np.ndarray:
    """∇g_σ(r) = -(r / σ²) g_σ(r)"""
    return -(r / sigma ** 2) * gaussian_profile(r, sigma)[..., None]


def gaussian_scalar(x, z, sigma: float) -> float:
    """
    スカラーのガウスカーネル

    Args:
        x: 点 (n,)
        z: 点 (n,)
        sigma: カーネル幅

    Returns:
        exp(-‖x - z‖² / 2σ²) ∈ (0, 1]
    """
    sigma = check_sigma(sigma)
    x, z = check_pair(x, z)
    return float(gaussian_profile(x - z, sigma))


def gaussian_odd_scalar(x, z, sigma: float) -> float:
    """奇関数ガウスカーネル ½(k(x, z) - k(-x, z))"""
    sigma = check_sigma(sigma)
    x, z = check_pair(x, z)
    return float(0.5 * (gaussian_profile(x - z, sigma) - gaussian_profile(x + z, sigma)))


def gaussian_even_scalar(x, z, sigma: float) -> float:
    """偶関数ガウスカーネル ½(k(x, z) + k(-x, z))"""
    sigma = check_sigma(sigma)
    x, z = check_pair(x, z)
    return float(0.5 * (gaussian_profile(x - z, sigma) + gaussian_profile(x + z, sigma)))


def scalar_kernel_gradients(X: np.ndarray, Z: np.ndarray, sigma: float, parity: int = 0) -> np.ndarray:
    """
    生成スカラーカーネルの x に関する勾配 ∇ₓk(x, z) をまとめて計算

    Args:
        X: (M, n) 評価点
        Z: (N, n) 中心点
        sigma: カーネル幅
        parity: 0 = ガウス, -1 = 奇関数版, +1 = 偶関数版

    Returns:
        (M, N, n) の勾配
    """
    R_minus = X[:, None, :] - Z[None, :, :]
    grad = gaussian_profile_gradient(R_minus, sigma)
    if parity == 0:
        return grad
    # ∇ₓ g(x + z) = (∇g)(x + z)
    R_plus = X[:, None, :] + Z[None, :, :]
    return 0.5 * (grad + parity * gaussian_profile_gradient(R_plus, sigma))
