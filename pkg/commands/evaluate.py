"""
evaluate サブコマンド - 奇関数誤差・ハミルトニアン・テスト軌道の評価表を書き出す
"""
import argparse
import logging
from pathlib import Path
from typing import Dict, List

from aggregators.evaluation import EvaluationAggregator
from collectors.simulator import rollout_error
from collectors.systems import HamiltonianSystem, symplecticity_defect
from managers.model_manager import ModelManager
from models.domain import TrainedModel
from models.schemas import EvaluationReport
from utils.export import (
    artifact_name,
    export_field_grid,
    export_hamiltonian_table,
    export_odd_error_table,
    export_rollout,
)
from .dependencies import add_experiment_arguments, build_model_config, guarded_output, output_dir
from .schemas import ExperimentConfig

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("evaluate", help="学習モデルを評価")
    parser.add_argument("--model", type=Path, required=True, help="学習済みモデル JSON")
    parser.add_argument("--samples", type=int, default=None, help="奇関数誤差のサンプル数")
    parser.add_argument("--defect-time", dest="defect_time", type=float, default=1.0,
                        help="シンプレクティック条件を調べるフローの時間 [s]")
    add_experiment_arguments(parser)
    parser.set_defaults(handler=run, command="evaluate")


def evaluate_model(
    model: TrainedModel,
    system: HamiltonianSystem,
    config: ExperimentConfig,
    samples: int | None = None,
    defect_time: float = 1.0,
):
    """
    1モデル分の評価

    Returns:
        (EvaluationReport, RolloutResult または None)
    """
    rollout = None
    defect = None
    if config.x0 is not None:
        if config.test_t_end is not None:
            rollout = rollout_error(system, model, config.x0, config.test_dt, config.test_t_end)
        defect = symplecticity_defect(model, config.x0, defect_time, config.test_dt)
    else:
        logger.info("no test initial point; skipping rollout and symplecticity defect")
    aggregator = EvaluationAggregator(system, samples=samples, seed=config.seed)
    return aggregator.evaluate(model, rollout, defect), rollout


def write_reports(reports: List[EvaluationReport], out: Path, system: str, seed: int) -> Dict[str, Path]:
    """奇関数誤差表・ハミルトニアン表の CSV を書き出す"""
    paths = {"odd_error": export_odd_error_table(reports, out / artifact_name("odd_error", system, seed=seed))}
    if any(r.hamiltonian is not None for r in reports):
        paths["hamiltonian"] = export_hamiltonian_table(
            reports, out / artifact_name("hamiltonian", system, seed=seed)
        )
    return paths


def run(args: argparse.Namespace) -> int:
    model = ModelManager().load_model(args.model)
    config = build_model_config(args, model)
    system = config.build_system()
    report, rollout = evaluate_model(model, system, config, args.samples, args.defect_time)

    family = model.family.value
    with guarded_output(output_dir(config), "evaluate") as out:
        paths = write_reports([report], out, f"{system.name}_{family}", config.seed)
        if rollout is not None:
            paths["rollout"] = export_rollout(
                rollout, out / artifact_name("rollout", system.name, family, config.seed)
            )
        if report.field_grid:
            paths["field"] = export_field_grid(
                report, out / artifact_name("field", system.name, family, config.seed)
            )

    print(f"odd_error_mean={report.odd_error.mean!r}")
    print(f"odd_error_variance={report.odd_error.variance!r}")
    if report.hamiltonian is not None:
        print(f"hamiltonian_variance={report.hamiltonian.variance!r}")
    if report.rollout:
        print(f"rollout_mean_error={report.rollout_mean_error!r}")
    if report.symplecticity_defect is not None:
        print(f"symplecticity_defect={report.symplecticity_defect!r}")
    for name, path in paths.items():
        print(f"✅ {name}: {path}")
    return 0
