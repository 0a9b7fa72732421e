"""
ベクトル値カーネルリッジ回帰

(G + Nλ I) a = y を解き、f*(x) = Σ K(x, x_i) a_i と
学習したハミルトニアン Ĥ(x) = -Σ ∇ᵀk(x - x_i) Jᵀ a_i を評価する。
係数は sample-major（ブロック i がサンプル i）で並べる。
"""
import logging

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from core.config import settings
from core.errors import (
    ContractViolationError,
    DimensionMismatchError,
    InvalidParameterError,
    SolveError,
)
from core.symplectic import symplectic_matrix
from kernels.matrix import generator_gradients, kernel_blocks
from models.domain import Dataset, TrainedModel
from models.schemas import KernelSpec

logger = logging.getLogger(__name__)


def _check_dataset(dataset: Dataset, spec: KernelSpec) -> None:
    if dataset.dim != spec.dim:
        raise DimensionMismatchError(spec.dim, dataset.dim, what="dataset")


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if not (lam > 0 and np.isfinite(lam)):
        raise InvalidParameterError(f"lambda must be positive and finite, got {lam}")
    return lam


def blocks_to_matrix(blocks: np.ndarray) -> np.ndarray:
    """(M, N, n, n) のブロックを (Mn, Nn) の行列に並べる"""
    M, N, n, _ = blocks.shape
    return blocks.transpose(0, 2, 1, 3).reshape(M * n, N * n)


def assemble_gram(dataset: Dataset, spec: KernelSpec) -> np.ndarray:
    """
    ブロックグラム行列を組み立て

    Args:
        dataset: 学習データ
        spec: カーネル仕様

    Returns:
        (i, j) ブロックが K(x_i, x_j) の (Nn, Nn) 対称行列
    """
    _check_dataset(dataset, spec)
    return blocks_to_matrix(kernel_blocks(dataset.points, dataset.points, spec))


def _residual_ok(residual: np.ndarray, targets: np.ndarray) -> bool:
    r = np.linalg.norm(residual, axis=1)
    bound = settings.residual_tolerance * np.maximum(1.0, np.linalg.norm(targets, axis=1))
    return bool(np.all(r <= bound))


def solve_coefficients(dataset: Dataset, spec: KernelSpec, lam: float) -> TrainedModel:
    """
    正則化最小二乗問題を解いて係数 a_i を求める

    Args:
        dataset: 学習データ
        spec: カーネル仕様
        lam: 正則化パラメータ λ > 0

    Returns:
        表現定理の残差条件を満たす学習済みモデル

    Raises:
        InvalidParameterError: λ ≤ 0
        SolveError: 分解・求解に失敗した場合（条件数付き）
    """
    lam = _check_lambda(lam)
    G = assemble_gram(dataset, spec)
    N, n = dataset.points.shape
    size = N * n
    A = G + N * lam * np.eye(size)
    y = dataset.derivatives.reshape(-1)

    jitter = 0.0
    try:
        factor = cho_factor(A, lower=True)
    except LinAlgError:
        jitter = settings.jitter_scale * float(np.trace(G)) / size
        logger.warning(
            "Cholesky failed (family=%s, sigma=%g, lambda=%g); retrying with jitter %.3e",
            spec.family.value, spec.sigma, lam, jitter,
        )
        try:
            factor = cho_factor(A + jitter * np.eye(size), lower=True)
        except LinAlgError as e:
            raise SolveError("Cholesky factorization failed", float(np.linalg.cond(A))) from e

    a = cho_solve(factor, y)
    # 反復改良（ジッターを入れた場合も元の系の解に近づける）
    for _ in range(settings.refinement_steps):
        residual = (A @ a - y).reshape(N, n)
        if _residual_ok(residual, dataset.derivatives):
            break
        a = a - cho_solve(factor, residual.reshape(-1))

    if not np.all(np.isfinite(a)):
        raise SolveError("non-finite coefficients", float(np.linalg.cond(A)))
    residual = (A @ a - y).reshape(N, n)
    if not _residual_ok(residual, dataset.derivatives):
        raise SolveError(
            f"representer residual {np.linalg.norm(residual, axis=1).max():.3e} exceeds tolerance",
            float(np.linalg.cond(A)),
        )

    logger.debug(
        "trained %s model: N=%d sigma=%g lambda=%g", spec.family.value, N, spec.sigma, lam
    )
    return TrainedModel(
        spec=spec,
        lam=lam,
        centers=dataset.points,
        coeffs=a.reshape(N, n),
        meta=dataset.meta,
        jitter=jitter,
    )


def representer_residuals(model: TrainedModel, dataset: Dataset) -> np.ndarray:
    """
    各サンプルの残差 ‖Σ_j K(x_i, x_j) a_j + Nλ a_i - y_i‖

    Returns:
        (N,) の残差ノルム
    """
    G = assemble_gram(dataset, model.spec)
    N = dataset.n_samples
    a = model.coeffs.reshape(-1)
    residual = (G @ a + N * model.lam * a - dataset.derivatives.reshape(-1)).reshape(N, -1)
    return np.linalg.norm(residual, axis=1)


def _as_query(model: TrainedModel, x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    single = arr.ndim == 1
    X = arr[None, :] if single else arr
    if X.ndim != 2 or X.shape[1] != model.dim:
        raise DimensionMismatchError(model.dim, arr.shape, what="x")
    return X, single


def evaluate_field(model: TrainedModel, x) -> np.ndarray:
    """
    学習したベクトル場 f*(x) = Σ_i K(x, x_i) a_i

    Args:
        model: 学習済みモデル
        x: 点 (n,) または点列 (M, n)

    Returns:
        (n,) または (M, n)
    """
    X, single = _as_query(model, x)
    blocks = kernel_blocks(X, model.centers, model.spec)
    F = np.einsum("mnij,nj->mi", blocks, model.coeffs)
    return F[0] if single else F


def evaluate_hamiltonian(model: TrainedModel, x):
    """
    学習したハミルトニアン Ĥ(x) = -Σ_i ∇ᵀk(x, x_i) c_i,  c_i = Jᵀ a_i

    ゼロ点は任意（定数オフセットは正規化しない）。

    Raises:
        ContractViolationError: シンプレクティック系以外のカーネル
    """
    if not model.family.is_symplectic:
        raise ContractViolationError(
            f"learned Hamiltonian requires a symplectic kernel, got {model.family.value}"
        )
    X, single = _as_query(model, x)
    J = symplectic_matrix(model.dim)
    C = model.coeffs @ J  # 行 i が (Jᵀ a_i)ᵀ
    grads = generator_gradients(X, model.centers, model.spec)
    H = -np.einsum("mni,ni->m", grads, C)
    return float(H[0]) if single else H


def evaluate_potential(model: TrainedModel, x):
    """
    回転のない系のカーネルで学習した場のポテンシャル V̂(x) = -Σ_i ∇ᵀk(x, x_i) a_i

    f*(x) = ∇V̂(x) となる。
    """
    if not model.family.is_curl_free:
        raise ContractViolationError(
            f"learned potential requires a curl-free kernel, got {model.family.value}"
        )
    X, single = _as_query(model, x)
    grads = generator_gradients(X, model.centers, model.spec)
    V = -np.einsum("mni,ni->m", grads, model.coeffs)
    return float(V[0]) if single else V


def rkhs_norm(model: TrainedModel) -> float:
    """‖f*‖_ℋ = √(aᵀ G a)"""
    G = blocks_to_matrix(kernel_blocks(model.centers, model.centers, model.spec))
    a = model.coeffs.reshape(-1)
    return float(np.sqrt(max(a @ G @ a, 0.0)))


class KernelRegressor:
    """
    カーネル仕様と λ を保持して学習するラッパー

    交差検証・CLIから同じ設定で繰り返し学習するために使う。
    """

    def __init__(self, spec: KernelSpec, lam: float):
        """
        初期化

        Args:
            spec: カーネル仕様
            lam: 正則化パラメータ λ
        """
        self.spec = spec
        self.lam = _check_lambda(lam)

    def fit(self, dataset: Dataset) -> TrainedModel:
        logger.info(
            "training %s (sigma=%g, lambda=%g) on N=%d samples",
            self.spec.family.value, self.spec.sigma, self.lam, dataset.n_samples,
        )
        return solve_coefficients(dataset, self.spec, self.lam)
