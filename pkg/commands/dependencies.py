"""
CLI共通の依存関数
設定の読み込み、フラグの解釈、出力先の管理など
"""
import argparse
import json
import logging
import shutil
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional

from core.config import settings
from core.errors import ArtifactError, InvalidParameterError
from .schemas import RECIPES, ExperimentConfig

logger = logging.getLogger(__name__)

# フラグ名 → ExperimentConfig のフィールド
_FLAG_FIELDS = (
    "system", "params", "ics", "dt", "t_end", "noise_std", "seed", "kernel",
    "sigma", "lam", "folds", "grid_sigma", "grid_lambda", "x0", "test_t_end", "out",
)


# ========== Flag parsers ==========

def parse_floats(text: str) -> List[float]:
    """'0.5,1,2' → [0.5, 1.0, 2.0]"""
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def parse_params(text: str) -> Dict[str, float]:
    """'m=0.5,k=1' → {"m": 0.5, "k": 1.0}"""
    params: Dict[str, float] = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"expected key=value, got {item!r}")
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise argparse.ArgumentTypeError(f"parameter {key!r} is not a number: {value!r}")
    return params


def parse_points(text: str) -> List[List[float]]:
    """'q,p;q,p' → [[q, p], [q, p]]"""
    return [parse_floats(chunk) for chunk in text.split(";") if chunk.strip()]


# 負の数で始まる値を取りうるフラグ
NEGATIVE_VALUE_FLAGS = ("--x0", "--ics", "--box")


def join_negative_values(argv: List[str]) -> List[str]:
    """
    '--box -1,1,-2,2' を '--box=-1,1,-2,2' にまとめる

    argparse は '-1,1' のような値を未知のフラグとして扱う。
    """
    joined: List[str] = []
    tokens = iter(argv)
    for token in tokens:
        if token in NEGATIVE_VALUE_FLAGS:
            value = next(tokens, None)
            if value is None:
                joined.append(token)
            elif value[:1] == "-" and value[1:2] in set("0123456789."):
                joined.append(f"{token}={value}")
            else:
                joined.extend([token, value])
        else:
            joined.append(token)
    return joined


def add_experiment_arguments(parser: argparse.ArgumentParser) -> None:
    """実験レシピを上書きするフラグを追加（未指定は None のまま）"""
    group = parser.add_argument_group("experiment")
    group.add_argument("--system", help="oscillator / pendulum")
    group.add_argument("--params", type=parse_params, help="物理パラメータ k=v,...")
    group.add_argument("--ics", type=parse_points, help='初期条件 "q,p;q,p;..."')
    group.add_argument("--dt", type=float, help="時間刻み [s]")
    group.add_argument("--t-end", dest="t_end", type=float, help="終端時刻 [s]")
    group.add_argument("--noise-std", dest="noise_std", type=float, help="ノイズ標準偏差")
    group.add_argument("--seed", type=int, help="乱数シード")
    group.add_argument("--kernel", help="カーネルの種類（例: oddsymplectic）")
    group.add_argument("--sigma", type=float, help="カーネル幅 σ")
    group.add_argument("--lambda", dest="lam", type=float, help="正則化パラメータ λ")
    group.add_argument("--folds", type=int, help="交差検証の fold 数")
    group.add_argument("--grid-sigma", dest="grid_sigma", type=parse_floats, help="σ のグリッド")
    group.add_argument("--grid-lambda", dest="grid_lambda", type=parse_floats, help="λ のグリッド")
    group.add_argument("--x0", type=parse_floats, help="テスト軌道の初期点 q,p")
    group.add_argument("--test-t-end", dest="test_t_end", type=float, help="テスト軌道の終端時刻 [s]")
    group.add_argument("--out", type=Path, help="出力ディレクトリ")


# ========== Config ==========

def load_config_file(path: Path | str) -> Dict[str, Any]:
    """
    JSON の実験レシピを読み込み

    Raises:
        ArtifactError: ファイルが無い・JSON として読めない場合
    """
    path = Path(path)
    if not path.exists():
        raise ArtifactError(f"config file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ArtifactError(f"failed to read config {path}: {e}") from e
    if not isinstance(data, dict):
        raise ArtifactError(f"config {path} must be a JSON object")
    if "lambda" in data:
        data["lam"] = data.pop("lambda")
    return data


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    """
    設定ファイル（なければ --system のレシピ）にフラグを重ねて ExperimentConfig を作る

    Raises:
        pydantic.ValidationError: フィールド単位の検証エラー
    """
    data: Dict[str, Any] = {}
    config_path = getattr(args, "config", None)
    if config_path:
        data = load_config_file(config_path)
    elif getattr(args, "system", None) in RECIPES:
        data = dict(RECIPES[args.system])

    for name in _FLAG_FIELDS:
        value = getattr(args, name, None)
        if value is not None:
            data[name] = value
    return ExperimentConfig(**data)


def output_dir(config: ExperimentConfig) -> Path:
    """出力先（--out、設定ファイル、HAMKERNEL_OUTPUT_ROOT の順）"""
    return settings.resolve_output(config.out)


def require(value: Optional[Any], flag: str) -> Any:
    if value is None:
        raise InvalidParameterError(f"{flag} is required")
    return value


# ========== Output guard ==========

def _files_under(root: Path, skip: Path) -> set:
    if not root.exists():
        return set()
    return {p for p in root.rglob("*") if p.is_file() and skip not in p.parents}


@contextmanager
def guarded_output(out: Path, command: str) -> Iterator[Path]:
    """
    コマンドの出力先を管理

    コマンドが失敗した場合、実行中に書かれたファイルを
    <out>/quarantine/<command>/ に移動してから例外を再送出する。
    """
    out = Path(out)
    quarantine_root = out / settings.quarantine_dirname
    before = _files_under(out, quarantine_root)
    out.mkdir(parents=True, exist_ok=True)
    try:
        yield out
    except BaseException:
        written = sorted(_files_under(out, quarantine_root) - before)
        if written:
            target_root = quarantine_root / command
            for path in written:
                target = target_root / path.relative_to(out)
                target.parent.mkdir(parents=True, exist_ok=True)
                shutil.move(str(path), str(target))
            logger.warning("moved %d partial output(s) to %s", len(written), target_root)
        raise


def build_model_config(args: argparse.Namespace, model) -> ExperimentConfig:
    """
    学習済みモデルを扱うコマンド用の設定

    --config も --system も無い場合は、モデルに記録された学習データの系と
    パラメータからレシピを選ぶ。
    """
    meta = getattr(model, "meta", None)
    if meta is not None and not getattr(args, "config", None) and getattr(args, "system", None) is None:
        args = argparse.Namespace(**vars(args))
        args.system = meta.system
        if getattr(args, "params", None) is None:
            args.params = dict(meta.params)
    return build_config(args)
