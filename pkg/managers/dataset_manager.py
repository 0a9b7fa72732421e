"""データセットファイル管理モジュール"""
import json
import logging
import os
from pathlib import Path

import pandas as pd
from pydantic import ValidationError

from core.errors import ArtifactError
from models.domain import Dataset
from models.schemas import DatasetMeta

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def meta_path_for(csv_path: Path | str) -> Path:
    """データセット CSV に対応するメタデータファイル <stem>.meta.json"""
    csv_path = Path(csv_path)
    return csv_path.with_name(f"{csv_path.stem}.meta.json")


class DatasetManager:
    """データセットを CSV（x1..xn, y1..yn）とメタデータ JSON で保存・読み込み"""

    def save_dataset(self, dataset: Dataset, path: Path | str) -> Path:
        """
        データセットを保存

        Args:
            dataset: データセット
            path: CSV の保存先

        Returns:
            保存した CSV のパス
        """
        path = Path(path)
        n = dataset.dim
        columns = [f"x{i + 1}" for i in range(n)] + [f"y{i + 1}" for i in range(n)]
        frame = pd.DataFrame(
            [list(x) + list(y) for x, y in zip(dataset.points, dataset.derivatives)],
            columns=columns,
        )
        try:
            os.makedirs(path.parent, exist_ok=True)
            frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
            if dataset.meta is not None:
                with open(meta_path_for(path), "w", encoding="utf-8") as f:
                    json.dump(dataset.meta.model_dump(mode="json"), f, ensure_ascii=False, indent=2)
        except OSError as e:
            raise ArtifactError(f"failed to write dataset {path}: {e}") from e
        logger.info("saved dataset (N=%d) to %s", dataset.n_samples, path)
        return path

    def load_dataset(self, path: Path | str) -> Dataset:
        """
        データセットを読み込み（メタデータがあれば一緒に読む）

        Raises:
            ArtifactError: ファイルが無い・ヘッダが不正な場合
        """
        path = Path(path)
        if not path.exists():
            raise ArtifactError(f"dataset file not found: {path}")
        try:
            frame = pd.read_csv(path, float_precision="round_trip")
        except (OSError, ValueError) as e:
            raise ArtifactError(f"failed to read dataset {path}: {e}") from e

        n = len(frame.columns) // 2
        expected = [f"x{i + 1}" for i in range(n)] + [f"y{i + 1}" for i in range(n)]
        if list(frame.columns) != expected:
            raise ArtifactError(f"dataset header must be {','.join(expected)}, got {','.join(frame.columns)}")

        meta = None
        meta_path = meta_path_for(path)
        if meta_path.exists():
            try:
                with open(meta_path, "r", encoding="utf-8") as f:
                    meta = DatasetMeta(**json.load(f))
            except (OSError, json.JSONDecodeError, ValidationError) as e:
                raise ArtifactError(f"failed to read dataset metadata {meta_path}: {e}") from e

        values = frame.to_numpy(dtype=float)
        return Dataset(values[:, :n], values[:, n:], meta)
