"""
tune サブコマンド - 交差検証のグリッドサーチで (σ, λ) を選ぶ
"""
import argparse
from pathlib import Path

from analyzers.tuner import grid_search
from managers.dataset_manager import DatasetManager
from utils.export import artifact_name, export_score_table
from .dependencies import add_experiment_arguments, build_config, guarded_output, output_dir


def register(subparsers) -> None:
    parser = subparsers.add_parser("tune", help="交差検証で σ, λ を選ぶ")
    parser.add_argument("--dataset", type=Path, required=True, help="データセット CSV")
    add_experiment_arguments(parser)
    parser.set_defaults(handler=run, command="tune")


def run(args: argparse.Namespace) -> int:
    config = build_config(args)
    dataset = DatasetManager().load_dataset(args.dataset)
    system = dataset.meta.system if dataset.meta is not None else config.system
    result = grid_search(dataset, config.kernel, config.grid_spec())

    with guarded_output(output_dir(config), "tune") as out:
        path = export_score_table(
            result, out / artifact_name("scores", system, result.family.value, config.seed)
        )
    print(f"sigma={result.sigma!r}")
    print(f"lambda={result.lam!r}")
    print(f"cv_mse={result.score!r}")
    print(f"✅ scores: {path}")
    return 0
