"""
例外クラス
ライブラリ全体で投げる例外はすべて HamKernelError を継承する
"""
from typing import Optional


class HamKernelError(Exception):
    """ライブラリ共通の基底例外"""


class InvalidParameterError(HamKernelError, ValueError):
    """パラメータが不正（σ ≤ 0, λ ≤ 0, k > N など）"""


class DimensionMismatchError(HamKernelError, ValueError):
    """状態ベクトルの次元が一致しない"""

    def __init__(self, expected: int, actual, what: str = "point"):
        self.expected = expected
        self.actual = actual
        super().__init__(f"{what}: expected dimension {expected}, got {actual}")


class SolveError(HamKernelError):
    """正則化連立方程式が解けない"""

    def __init__(self, message: str, condition_number: Optional[float] = None):
        self.condition_number = condition_number
        if condition_number is not None:
            message = f"{message} (Gram condition number {condition_number:.3e})"
        super().__init__(message)


class IntegrationError(HamKernelError):
    """積分中に非有限な状態が現れた"""

    def __init__(self, step: int, message: str = "non-finite state encountered"):
        self.step = step
        super().__init__(f"{message} at step {step}")


class FoldError(HamKernelError):
    """交差検証のfoldで学習に失敗"""

    def __init__(self, fold: int, cause: Exception):
        self.fold = fold
        self.cause = cause
        super().__init__(f"training failed on fold {fold}: {cause}")


class ContractViolationError(HamKernelError):
    """事前条件・事後条件の違反"""


class ArtifactError(HamKernelError):
    """モデル・データセットファイルの読み書きエラー"""


class StageError(HamKernelError):
    """repro パイプラインのステージ失敗"""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}' failed: {cause}")
