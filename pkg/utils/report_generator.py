"""
再現実験のサマリーレポート生成モジュール
測定値と報告値を並べ、受け入れ基準ごとに合否を付ける
"""
import json
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from models.schemas import EvaluationReport, KernelFamily

SEPARABLE = KernelFamily.SEPARABLE_GAUSSIAN.value
ODD_SYMPLECTIC = KernelFamily.ODD_SYMPLECTIC.value

# 報告されている数値（交差検証の結果と評価表）
REPORTED_VALUES: Dict[str, Dict[str, Any]] = {
    "oscillator": {
        "hyperparameters": {SEPARABLE: (19.5, 1e-4), ODD_SYMPLECTIC: (12.1, 1e-4)},
        "odd_error": {"true": (0.0, 0.0), SEPARABLE: (0.65, 0.08), ODD_SYMPLECTIC: (0.0, 0.0)},
        "hamiltonian": {"real": (1.99, 5.43e-9), "learned": (-108.54, 6.24e-9)},
    },
    "pendulum": {
        "hyperparameters": {SEPARABLE: (12.3, 0.1), ODD_SYMPLECTIC: (3.0, 1e-4)},
        "odd_error": {"true": (0.0, 0.0), SEPARABLE: (7.87, 1.49), ODD_SYMPLECTIC: (0.0, 0.0)},
        "hamiltonian": {"real": (9.81, 2.2e-6), "learned": (-16.85, 1.34e-6)},
    },
}


def _fmt(value: Optional[float], spec: str) -> str:
    """値が無い場合は "-" """
    return "-" if value is None else format(value, spec)


@dataclass
class ReportConfig:
    """レポート生成設定（判定の許容値）"""
    title: str = "Symplectic kernel learning: reproduction summary"
    odd_mean_tolerance: float = 1e-10
    odd_variance_tolerance: float = 1e-20
    true_odd_tolerance: float = 1e-12
    hamiltonian_variance_tolerance: float = 1e-5
    oscillator_rollout_ratio: float = 5.0
    separable_odd_ranges: Optional[Dict[str, tuple]] = None

    def __post_init__(self):
        if self.separable_odd_ranges is None:
            self.separable_odd_ranges = {"oscillator": (0.1, 2.0), "pendulum": (2.0, 25.0)}


class ReportGenerator:
    """
    サマリーレポート生成クラス

    data の形式:
        {
            "experiment": "oscillator",
            "seed": 0,
            "n_samples": 15,
            "models": {
                "separablegaussian": {"sigma", "lambda", "cv_mse", "report": EvaluationReport},
                "oddsymplectic": {...},
            },
        }
    """

    def __init__(self, config: ReportConfig = None):
        self.config = config or ReportConfig()

    def generate_report(self, data: Dict[str, Any], output_format: str = "markdown") -> bytes:
        """
        レポートを生成

        Args:
            data: 実験結果
            output_format: 出力形式（markdown, json）

        Returns:
            レポートのバイナリデータ
        """
        if output_format == "markdown":
            return self._generate_markdown_report(data)
        elif output_format == "json":
            return self._generate_json_report(data)
        else:
            raise ValueError(f"Unsupported format: {output_format}")

    def evaluate_checks(self, data: Dict[str, Any]) -> List[Dict[str, Any]]:
        """受け入れ基準ごとの判定"""
        cfg = self.config
        experiment = data["experiment"]
        models = data["models"]
        sep: EvaluationReport = models[SEPARABLE]["report"]
        odd: EvaluationReport = models[ODD_SYMPLECTIC]["report"]
        checks: List[Dict[str, Any]] = []

        def add(name: str, passed: bool, measured: str):
            checks.append({"check": name, "passed": bool(passed), "measured": measured})

        add(
            "odd-symplectic e_odd is structurally zero",
            odd.odd_error.mean <= cfg.odd_mean_tolerance and odd.odd_error.variance <= cfg.odd_variance_tolerance,
            f"mean={odd.odd_error.mean:.3e}, variance={odd.odd_error.variance:.3e}",
        )
        if sep.true_odd_error is not None:
            add(
                "true system e_odd is zero",
                sep.true_odd_error.mean <= cfg.true_odd_tolerance,
                f"mean={sep.true_odd_error.mean:.3e}",
            )
        lo, hi = cfg.separable_odd_ranges.get(experiment, (0.0, float("inf")))
        add(
            f"separable-Gaussian e_odd mean in [{lo}, {hi}]",
            lo <= sep.odd_error.mean <= hi,
            f"mean={sep.odd_error.mean:.4g}",
        )
        if odd.hamiltonian is not None:
            H = odd.hamiltonian
            add(
                "learned Hamiltonian is constant along the rollout",
                H.variance <= cfg.hamiltonian_variance_tolerance,
                f"variance={H.variance:.3e}",
            )
            if H.true_variance is not None:
                add(
                    "true Hamiltonian is constant under RK4",
                    H.true_variance <= cfg.hamiltonian_variance_tolerance,
                    f"variance={H.true_variance:.3e}",
                )
        sep_err, odd_err = sep.rollout_mean_error, odd.rollout_mean_error
        if sep_err is not None and odd_err is not None:
            if experiment == "oscillator":
                ratio = cfg.oscillator_rollout_ratio
                add(
                    f"odd-symplectic rollout error <= 1/{ratio:g} of separable",
                    odd_err * ratio <= sep_err,
                    f"odd={odd_err:.4g}, separable={sep_err:.4g}",
                )
            else:
                add(
                    "odd-symplectic rollout error < separable",
                    odd_err < sep_err,
                    f"odd={odd_err:.4g}, separable={sep_err:.4g}",
                )
        if sep.symplecticity_defect is not None and odd.symplecticity_defect is not None:
            add(
                "odd-symplectic flow is closer to symplectic",
                odd.symplecticity_defect < sep.symplecticity_defect,
                f"odd={odd.symplecticity_defect:.3e}, separable={sep.symplecticity_defect:.3e}",
            )
        return checks

    def _generate_json_report(self, data: Dict[str, Any]) -> bytes:
        payload = {
            "experiment": data["experiment"],
            "seed": data["seed"],
            "n_samples": data["n_samples"],
            "models": {
                family: {
                    "sigma": entry["sigma"],
                    "lambda": entry["lambda"],
                    "cv_mse": entry["cv_mse"],
                    "report": entry["report"].model_dump(mode="json", exclude={"rollout", "field_grid"}),
                    "rollout_mean_error": entry["report"].rollout_mean_error,
                }
                for family, entry in data["models"].items()
            },
            "checks": self.evaluate_checks(data),
        }
        return json.dumps(payload, ensure_ascii=False, indent=2).encode("utf-8")

    def _generate_markdown_report(self, data: Dict[str, Any]) -> bytes:
        """
        Markdownレポートを生成
        """
        experiment = data["experiment"]
        reference = REPORTED_VALUES.get(experiment, {})
        md = f"""# {self.config.title}

実験: {experiment}
シード: {data['seed']}
サンプル数 N: {data['n_samples']}

## ハイパーパラメータ

| モデル | σ | λ | CV MSE | 報告値 (σ, λ) |
|--------|---|---|--------|---------------|
"""
        for family, entry in data["models"].items():
            ref = reference.get("hyperparameters", {}).get(family)
            ref_text = f"({ref[0]:g}, {ref[1]:g})" if ref else "-"
            md += f"| {family} | {entry['sigma']:.6g} | {entry['lambda']:.6g} | {entry['cv_mse']:.6g} | {ref_text} |\n"

        md += """
## 奇関数誤差 e_odd

| モデル | 平均 | 分散 | 報告値 (平均, 分散) |
|--------|------|------|---------------------|
"""
        odd_refs = reference.get("odd_error", {})
        first: EvaluationReport = next(iter(data["models"].values()))["report"]
        if first.true_odd_error is not None:
            ref = odd_refs.get("true")
            md += f"| true | {first.true_odd_error.mean:.3e} | {first.true_odd_error.variance:.3e} | {ref or '-'} |\n"
        for family, entry in data["models"].items():
            report: EvaluationReport = entry["report"]
            ref = odd_refs.get(family)
            md += f"| {family} | {report.odd_error.mean:.3e} | {report.odd_error.variance:.3e} | {ref or '-'} |\n"

        md += """
## ハミルトニアン

| モデル | H | 平均 | 分散 | オフセット | 報告値 (平均, 分散) |
|--------|---|------|------|------------|---------------------|
"""
        ham_refs = reference.get("hamiltonian", {})
        for family, entry in data["models"].items():
            H = entry["report"].hamiltonian
            if H is None:
                continue
            if H.true_mean is not None:
                md += f"| {family} | real | {H.true_mean:.6g} | {H.true_variance:.3e} | - | {ham_refs.get('real', '-')} |\n"
            offset = f"{H.offset:.6g}" if H.offset is not None else "-"
            md += f"| {family} | learned | {H.mean:.6g} | {H.variance:.3e} | {offset} | {ham_refs.get('learned', '-')} |\n"

        md += """
## テスト軌道

| モデル | 平均誤差 | 最大誤差 | シンプレクティック条件のずれ |
|--------|----------|----------|------------------------------|
"""
        for family, entry in data["models"].items():
            report = entry["report"]
            mean_err = _fmt(report.rollout_mean_error, ".4g")
            max_err = _fmt(report.rollout_max_error, ".4g")
            defect = _fmt(report.symplecticity_defect, ".3e")
            md += f"| {family} | {mean_err} | {max_err} | {defect} |\n"

        md += """
## 判定

| 基準 | 結果 | 測定値 |
|------|------|--------|
"""
        for check in self.evaluate_checks(data):
            mark = "PASS" if check["passed"] else "FAIL"
            md += f"| {check['check']} | {mark} | {check['measured']} |\n"

        md += """
---

*単振り子の真のハミルトニアンの平均は報告値 9.81 と一致しない（H(π/2, 0) = m g l = 4.905）。判定には分散のみを使う。*
"""
        return md.encode("utf-8")
