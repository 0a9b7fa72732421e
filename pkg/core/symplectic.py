"""
シンプレクティック行列 J = [[0, I], [-I, 0]]
"""
from functools import lru_cache

import numpy as np

from .errors import InvalidParameterError


def validate_phase_dim(dim: int) -> int:
    """位相空間の次元（偶数かつ2以上）を検証"""
    if int(dim) != dim or dim < 2 or dim % 2 != 0:
        raise InvalidParameterError(f"phase-space dimension must be even and >= 2, got {dim}")
    return int(dim)


@lru_cache(maxsize=16)
def _symplectic_matrix(dim: int) -> np.ndarray:
    m = dim // 2
    J = np.zeros((dim, dim))
    J[:m, m:] = np.eye(m)
    J[m:, :m] = -np.eye(m)
    J.setflags(write=False)
    return J


def symplectic_matrix(dim: int) -> np.ndarray:
    """
    標準シンプレクティック行列を返す

    Args:
        dim: 位相空間の次元 n = 2m

    Returns:
        (n, n) の読み取り専用配列
    """
    return _symplectic_matrix(validate_phase_dim(dim))
