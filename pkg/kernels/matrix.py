"""
行列値カーネル

- 分離型ガウスカーネル     K(x, z) = k_σ(x, z) I
- 回転のないカーネル       G_c(r) = -∇∇ᵀg_σ(r) = (1/σ²) e^{-rᵀr/2σ²} (I - r rᵀ/σ²)
- シンプレクティックカーネル K_s = J G_c Jᵀ
- 奇関数版・偶関数版       ½(K(x, z) ∓ K(-x, z))

どの関数も (x, z, spec) の純関数で、閉形式で評価する。
"""
from typing import Callable, Dict

import numpy as np

from core.errors import DimensionMismatchError
from core.symplectic import symplectic_matrix
from models.schemas import KernelFamily, KernelSpec
from .scalar import check_pair, gaussian_profile, scalar_kernel_gradients

KernelFunction = Callable[[np.ndarray, np.ndarray, KernelSpec], np.ndarray]


def curl_free_profile(r: np.ndarray, sigma: float) -> np.ndarray:
    """
    G_c(r) を最後の軸についてまとめて計算

    Args:
        r: (..., n) 差分ベクトル
        sigma: カーネル幅

    Returns:
        (..., n, n) の対称行列
    """
    n = r.shape[-1]
    scale = gaussian_profile(r, sigma) / sigma ** 2
    outer = r[..., :, None] * r[..., None, :]
    return scale[..., None, None] * (np.eye(n) - outer / sigma ** 2)


def _conjugate(blocks: np.ndarray, dim: int) -> np.ndarray:
    """J · blocks · Jᵀ"""
    J = symplectic_matrix(dim)
    return J @ blocks @ J.T


def _check(x, z, spec: KernelSpec) -> tuple[np.ndarray, np.ndarray]:
    return check_pair(x, z, spec.dim)


# ========== 個別のカーネル ==========

def separable_gaussian(x, z, spec: KernelSpec) -> np.ndarray:
    """分離型ガウスカーネル k_σ(x, z) Iₙ"""
    x, z = _check(x, z, spec)
    return gaussian_profile(x - z, spec.sigma) * np.eye(spec.dim)


def curl_free(x, z, spec: KernelSpec) -> np.ndarray:
    """回転のないカーネル G_c(x - z)"""
    x, z = _check(x, z, spec)
    return curl_free_profile(x - z, spec.sigma)


def symplectic(x, z, spec: KernelSpec) -> np.ndarray:
    """シンプレクティックカーネル J G_c(x - z) Jᵀ"""
    return _conjugate(curl_free(x, z, spec), spec.dim)


def odd_curl_free(x, z, spec: KernelSpec) -> np.ndarray:
    """
    奇関数の回転のないカーネル -∇∇ᵀk_σ,odd(x, z)

    二階微分を展開した形で計算する。
    (x ∓ z)(x ∓ z)ᵀ は外積。
    """
    x, z = _check(x, z, spec)
    return 0.5 * (curl_free_profile(x - z, spec.sigma) - curl_free_profile(x + z, spec.sigma))


def odd_symplectic(x, z, spec: KernelSpec) -> np.ndarray:
    """奇関数のシンプレクティックカーネル J K_c,odd Jᵀ"""
    return _conjugate(odd_curl_free(x, z, spec), spec.dim)


def even_curl_free(x, z, spec: KernelSpec) -> np.ndarray:
    """偶関数の回転のないカーネル ½(K_c(x, z) + K_c(-x, z))"""
    x, z = _check(x, z, spec)
    return 0.5 * (curl_free_profile(x - z, spec.sigma) + curl_free_profile(x + z, spec.sigma))


def even_symplectic(x, z, spec: KernelSpec) -> np.ndarray:
    """偶関数のシンプレクティックカーネル J K_c,even Jᵀ"""
    return _conjugate(even_curl_free(x, z, spec), spec.dim)


KERNELS: Dict[KernelFamily, KernelFunction] = {
    KernelFamily.SEPARABLE_GAUSSIAN: separable_gaussian,
    KernelFamily.CURL_FREE: curl_free,
    KernelFamily.ODD_CURL_FREE: odd_curl_free,
    KernelFamily.EVEN_CURL_FREE: even_curl_free,
    KernelFamily.SYMPLECTIC: symplectic,
    KernelFamily.ODD_SYMPLECTIC: odd_symplectic,
    KernelFamily.EVEN_SYMPLECTIC: even_symplectic,
}

# 奇関数版 = -1, 偶関数版 = +1, それ以外 = 0
PARITY: Dict[KernelFamily, int] = {
    KernelFamily.SEPARABLE_GAUSSIAN: 0,
    KernelFamily.CURL_FREE: 0,
    KernelFamily.SYMPLECTIC: 0,
    KernelFamily.ODD_CURL_FREE: -1,
    KernelFamily.ODD_SYMPLECTIC: -1,
    KernelFamily.EVEN_CURL_FREE: 1,
    KernelFamily.EVEN_SYMPLECTIC: 1,
}


def evaluate_kernel(x, z, spec: KernelSpec) -> np.ndarray:
    """spec.family に応じたカーネル値 K(x, z) ∈ ℝⁿˣⁿ"""
    return KERNELS[spec.family](x, z, spec)


# ========== まとめて評価 ==========

def as_points(X, dim: int, what: str = "points") -> np.ndarray:
    """(M, n) の点列に変換し、次元を検証"""
    arr = np.asarray(X, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise DimensionMismatchError(dim, arr.shape, what=what)
    return arr


def kernel_blocks(X, Z, spec: KernelSpec) -> np.ndarray:
    """
    全ての組 (x_i, z_j) についてカーネル行列を計算

    Args:
        X: (M, n) 評価点
        Z: (N, n) 中心点
        spec: カーネル仕様

    Returns:
        (M, N, n, n) のブロック
    """
    X = as_points(X, spec.dim, "X")
    Z = as_points(Z, spec.dim, "Z")
    sigma = spec.sigma
    family = spec.family
    R_minus = X[:, None, :] - Z[None, :, :]

    if family is KernelFamily.SEPARABLE_GAUSSIAN:
        return gaussian_profile(R_minus, sigma)[..., None, None] * np.eye(spec.dim)

    blocks = curl_free_profile(R_minus, sigma)
    parity = PARITY[family]
    if parity != 0:
        R_plus = X[:, None, :] + Z[None, :, :]
        blocks = 0.5 * (blocks + parity * curl_free_profile(R_plus, sigma))

    if family.is_symplectic:
        blocks = _conjugate(blocks, spec.dim)
    return blocks


def generator_gradients(X, Z, spec: KernelSpec) -> np.ndarray:
    """
    カーネルを生成するスカラーカーネルの勾配 ∇ₓk(x, z)

    回転のない系・シンプレクティック系のカーネルは -∇∇ᵀk から作られるので、
    学習したハミルトニアン・ポテンシャルはこの勾配で書ける。

    Returns:
        (M, N, n) の勾配
    """
    X = as_points(X, spec.dim, "X")
    Z = as_points(Z, spec.dim, "Z")
    return scalar_kernel_gradients(X, Z, spec.sigma, PARITY[spec.family])
