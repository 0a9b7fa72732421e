"""
データエクスポート機能
CSV 形式での書き出しをサポート（浮動小数点は往復で完全一致する桁数）
"""
import os
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

import pandas as pd

from core.errors import ArtifactError
from models.schemas import EvaluationReport, GridSearchResult

FLOAT_FORMAT = "%.17g"


def artifact_name(kind: str, system: str, family: Optional[str] = None, seed: Optional[int] = None, ext: str = "csv") -> str:
    """
    出力ファイル名を生成（系・カーネル・シードを含める）

    例: rollout_oscillator_oddsymplectic_seed0.csv
    """
    parts = [kind, system]
    if family:
        parts.append(family)
    if seed is not None:
        parts.append(f"seed{seed}")
    return "_".join(parts) + f".{ext}"


def export_to_csv(data: pd.DataFrame | List[Dict[str, Any]], path: Path | str) -> Path:
    """
    データを CSV 形式で書き出し

    Args:
        data: DataFrame または辞書のリスト
        path: 保存先

    Returns:
        保存したファイルのパス
    """
    path = Path(path)
    frame = data if isinstance(data, pd.DataFrame) else pd.DataFrame(data)
    try:
        os.makedirs(path.parent, exist_ok=True)
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    except OSError as e:
        raise ArtifactError(f"failed to write {path}: {e}") from e
    return path


def export_score_table(result: GridSearchResult, path: Path | str) -> Path:
    """交差検証のスコア表 sigma,lambda,cv_mse"""
    frame = pd.DataFrame(result.table, columns=["sigma", "lambda", "cv_mse"])
    return export_to_csv(frame, path)


def odd_error_rows(reports: Iterable[EvaluationReport]) -> List[Dict[str, Any]]:
    """奇関数誤差の表（真の系の行を系ごとに1行、続いて各モデル）"""
    rows: List[Dict[str, Any]] = []
    seen_true = set()
    for report in reports:
        if report.true_odd_error is not None and report.system not in seen_true:
            seen_true.add(report.system)
            rows.append({
                "system": report.system,
                "model": "true",
                "mean": report.true_odd_error.mean,
                "variance": report.true_odd_error.variance,
            })
        rows.append({
            "system": report.system,
            "model": report.family.value,
            "mean": report.odd_error.mean,
            "variance": report.odd_error.variance,
        })
    return rows


def hamiltonian_rows(reports: Iterable[EvaluationReport]) -> List[Dict[str, Any]]:
    """真のハミルトニアンと学習したハミルトニアンの平均・分散"""
    rows: List[Dict[str, Any]] = []
    for report in reports:
        stats = report.hamiltonian
        if stats is None:
            continue
        if stats.true_mean is not None:
            rows.append({
                "system": report.system,
                "model": report.family.value,
                "hamiltonian": "real",
                "mean": stats.true_mean,
                "variance": stats.true_variance,
                "offset": 0.0,
            })
        rows.append({
            "system": report.system,
            "model": report.family.value,
            "hamiltonian": "learned",
            "mean": stats.mean,
            "variance": stats.variance,
            "offset": stats.offset,
        })
    return rows


def export_odd_error_table(reports: Iterable[EvaluationReport], path: Path | str) -> Path:
    frame = pd.DataFrame(odd_error_rows(reports), columns=["system", "model", "mean", "variance"])
    return export_to_csv(frame, path)


def export_hamiltonian_table(reports: Iterable[EvaluationReport], path: Path | str) -> Path:
    frame = pd.DataFrame(
        hamiltonian_rows(reports),
        columns=["system", "model", "hamiltonian", "mean", "variance", "offset"],
    )
    return export_to_csv(frame, path)


def export_rollout(rollout, path: Path | str) -> Path:
    """
    ロールアウトを書き出し

    列: t, true_x1..true_xn, learned_x1..learned_xn, err
    """
    n = rollout.true.states.shape[1]
    frame = pd.DataFrame({"t": rollout.times})
    for i in range(n):
        frame[f"true_x{i + 1}"] = rollout.true.states[:, i]
    for i in range(n):
        frame[f"learned_x{i + 1}"] = rollout.learned.states[:, i]
    frame["err"] = rollout.errors
    return export_to_csv(frame, path)


def export_field_grid(report: EvaluationReport, path: Path | str) -> Path:
    """評価時にサンプリングしたベクトル場の格子 x1,x2,f1,f2"""
    frame = pd.DataFrame(report.field_grid, columns=["x1", "x2", "f1", "f2"])
    return export_to_csv(frame, path)
