"""学習済みモデルファイル管理モジュール"""
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict

import numpy as np
from pydantic import ValidationError

from core.config import settings
from core.errors import ArtifactError
from models.domain import TrainedModel
from models.schemas import DatasetMeta, KernelSpec

logger = logging.getLogger(__name__)


class ModelManager:
    """学習済みモデルを JSON ファイルとして保存・読み込み"""

    def __init__(self, format_version: int | None = None):
        """
        初期化

        Args:
            format_version: 書き込むファイル形式のバージョン（省略時は設定値）
        """
        self.format_version = format_version or settings.model_format_version

    def to_document(self, model: TrainedModel) -> Dict[str, Any]:
        """モデルを JSON 化できる辞書に変換（浮動小数点は往復で完全一致する表現）"""
        return {
            "format_version": self.format_version,
            "family": model.spec.family.value,
            "sigma": model.spec.sigma,
            "lambda": model.lam,
            "dim": model.spec.dim,
            "n_samples": model.n_samples,
            "jitter": model.jitter,
            "centers": model.centers.tolist(),
            "coeffs": model.coeffs.tolist(),
            "dataset_meta": model.meta.model_dump(mode="json") if model.meta is not None else None,
        }

    def from_document(self, doc: Dict[str, Any]) -> TrainedModel:
        """
        辞書からモデルを復元

        Raises:
            ArtifactError: バージョン・形状・カーネル仕様が不正な場合
        """
        version = doc.get("format_version")
        if version != self.format_version:
            raise ArtifactError(f"unsupported model format_version: {version!r}")
        try:
            spec = KernelSpec(family=doc["family"], sigma=doc["sigma"], dim=doc["dim"])
            meta = DatasetMeta(**doc["dataset_meta"]) if doc.get("dataset_meta") else None
            centers = np.array(doc["centers"], dtype=float)
            coeffs = np.array(doc["coeffs"], dtype=float)
        except (KeyError, TypeError, ValueError, ValidationError) as e:
            raise ArtifactError(f"malformed model document: {e}") from e

        expected = (int(doc.get("n_samples", -1)), spec.dim)
        if centers.shape != expected or coeffs.shape != expected:
            raise ArtifactError(
                f"model arrays have shapes {centers.shape}/{coeffs.shape}, expected {expected}"
            )
        return TrainedModel(
            spec=spec,
            lam=float(doc["lambda"]),
            centers=centers,
            coeffs=coeffs,
            meta=meta,
            jitter=float(doc.get("jitter", 0.0)),
        )

    def save_model(self, model: TrainedModel, path: Path | str) -> Path:
        """
        モデルを保存

        Args:
            model: 学習済みモデル
            path: 保存先の JSON ファイル

        Returns:
            保存したファイルのパス
        """
        path = Path(path)
        try:
            os.makedirs(path.parent, exist_ok=True)
            with open(path, "w", encoding="utf-8") as f:
                json.dump(self.to_document(model), f, ensure_ascii=False, indent=2)
        except OSError as e:
            raise ArtifactError(f"failed to write model file {path}: {e}") from e
        logger.info("saved %s model to %s", model.family.value, path)
        return path

    def load_model(self, path: Path | str) -> TrainedModel:
        """モデルを読み込み"""
        path = Path(path)
        if not path.exists():
            raise ArtifactError(f"model file not found: {path}")
        try:
            with open(path, "r", encoding="utf-8") as f:
                doc = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ArtifactError(f"failed to read model file {path}: {e}") from e
        return self.from_document(doc)
