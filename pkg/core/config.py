"""
アプリケーション設定
環境変数は全てこのファイルで一元管理
"""
from pathlib import Path

from dotenv import load_dotenv
from pydantic_settings import BaseSettings, SettingsConfigDict

# .envファイルを読み込み（リポジトリ直下を優先、なければカレントディレクトリ）
_base_dir = Path(__file__).resolve().parent.parent
_env_paths = [
    _base_dir / ".env",
    Path.cwd() / ".env",
]
for _env_path in _env_paths:
    if _env_path.exists():
        load_dotenv(_env_path)
        break


class Settings(BaseSettings):
    """
    アプリケーション設定クラス
    環境変数（接頭辞 HAMKERNEL_）から設定を読み込み
    """
    model_config = SettingsConfigDict(
        env_prefix="HAMKERNEL_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # 基本設定
    app_name: str = "hamkernel"
    app_version: str = "1.0.0"
    debug: bool = False

    # 出力先（HAMKERNEL_OUTPUT_ROOT で上書き可能）
    base_dir: Path = _base_dir
    output_root: Path = Path("outputs")
    quarantine_dirname: str = "quarantine"

    # ログ設定
    log_level: str = "INFO"
    log_format: str = "plain"  # json or plain

    # 再現性
    default_seed: int = 0
    default_folds: int = 5

    # 線形ソルバー
    jitter_scale: float = 1e-10
    residual_tolerance: float = 1e-8
    refinement_steps: int = 2

    # 評価設定
    fd_perturbation: float = 1e-6  # フローのヤコビアン用
    odd_error_samples: int = 10000
    test_dt: float = 0.01  # テスト軌道の時間刻み [s]

    # ファイル形式
    model_format_version: int = 1

    def resolve_output(self, out: Path | str | None = None) -> Path:
        """
        出力ディレクトリを解決

        Args:
            out: 明示的に指定された出力先（Noneなら output_root）

        Returns:
            出力ディレクトリのパス
        """
        return Path(out) if out is not None else Path(self.output_root)


# 設定のシングルトンインスタンス
settings = Settings()
