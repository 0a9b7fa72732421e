"""
repro サブコマンド - 2つの数値実験を最初から最後まで再現

generate → tune → train（分離ガウス・奇シンプレクティック）→ evaluate → summary
"""
import argparse
import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator

from analyzers.regression import KernelRegressor
from analyzers.tuner import grid_search, kfold_split
from core.errors import StageError
from managers.dataset_manager import DatasetManager
from managers.model_manager import ModelManager
from models.schemas import KernelFamily, KernelSpec
from utils.export import artifact_name, export_field_grid, export_rollout, export_score_table
from utils.report_generator import ReportGenerator
from .dependencies import add_experiment_arguments, build_config, guarded_output, output_dir
from .evaluate import evaluate_model, write_reports
from .generate import generate_dataset
from .schemas import RECIPES, ExperimentConfig

logger = logging.getLogger(__name__)

COMPARED_FAMILIES = (KernelFamily.SEPARABLE_GAUSSIAN, KernelFamily.ODD_SYMPLECTIC)


def register(subparsers) -> None:
    parser = subparsers.add_parser("repro", help="数値実験を再現")
    parser.add_argument("experiment", choices=sorted(RECIPES), help="再現する実験")
    parser.add_argument("--samples", type=int, default=None, help="奇関数誤差のサンプル数")
    add_experiment_arguments(parser)
    parser.set_defaults(handler=run, command="repro")


@contextmanager
def stage(name: str) -> Iterator[None]:
    """段階名を付けて失敗を StageError にまとめる"""
    logger.info("stage: %s", name)
    try:
        yield
    except StageError:
        raise
    except Exception as e:
        raise StageError(name, e) from e


def run_experiment(config: ExperimentConfig, out: Path, samples: int | None = None) -> Dict[str, Any]:
    """
    実験を1回実行して成果物を out に書く

    Returns:
        ReportGenerator に渡すサマリーデータ
    """
    seed = config.seed
    with stage("generate"):
        dataset = generate_dataset(config)
        system_name = dataset.meta.system
        DatasetManager().save_dataset(dataset, out / artifact_name("dataset", system_name, seed=seed))

    tuned = {}
    with stage("tune"):
        grid = config.grid_spec()
        folds = kfold_split(dataset, grid.folds, grid.seed)
        for family in COMPARED_FAMILIES:
            result = grid_search(dataset, family, grid, folds)
            export_score_table(result, out / artifact_name("scores", system_name, family.value, seed))
            tuned[family] = result

    models = {}
    with stage("train"):
        for family, result in tuned.items():
            spec = KernelSpec(family=family, sigma=result.sigma, dim=dataset.dim)
            model = KernelRegressor(spec, result.lam).fit(dataset)
            ModelManager().save_model(
                model, out / artifact_name("model", system_name, family.value, seed, ext="json")
            )
            models[family] = model

    entries = {}
    with stage("evaluate"):
        system = config.build_system()
        reports = []
        for family, model in models.items():
            report, rollout = evaluate_model(model, system, config, samples)
            if rollout is not None:
                export_rollout(rollout, out / artifact_name("rollout", system_name, family.value, seed))
            if report.field_grid:
                export_field_grid(report, out / artifact_name("field", system_name, family.value, seed))
            reports.append(report)
            entries[family.value] = {
                "sigma": tuned[family].sigma,
                "lambda": tuned[family].lam,
                "cv_mse": tuned[family].score,
                "report": report,
            }
        write_reports(reports, out, system_name, seed)

    data = {"experiment": system_name, "seed": seed, "n_samples": dataset.n_samples, "models": entries}
    with stage("summary"):
        generator = ReportGenerator()
        (out / "summary.md").write_bytes(generator.generate_report(data, "markdown"))
        (out / "summary.json").write_bytes(generator.generate_report(data, "json"))
    return data


def run(args: argparse.Namespace) -> int:
    if not getattr(args, "config", None):
        args.system = args.experiment
    config = build_config(args)

    with guarded_output(output_dir(config), "repro") as root:
        out = root / f"repro_{args.experiment}_seed{config.seed}"
        out.mkdir(parents=True, exist_ok=True)
        data = run_experiment(config, out, args.samples)

    checks = ReportGenerator().evaluate_checks(data)
    for check in checks:
        mark = "✅" if check["passed"] else "❌"
        print(f"{mark} {check['check']}: {check['measured']}")
    print(f"summary: {out / 'summary.md'}")
    return 0
