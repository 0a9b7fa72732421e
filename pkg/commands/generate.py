"""
generate サブコマンド - 真の系から学習データセットを作成
"""
import argparse

from collectors.simulator import make_dataset
from core.errors import InvalidParameterError
from managers.dataset_manager import DatasetManager
from models.domain import Dataset
from utils.export import artifact_name
from .dependencies import add_experiment_arguments, build_config, guarded_output, output_dir
from .schemas import ExperimentConfig


def register(subparsers) -> None:
    parser = subparsers.add_parser("generate", help="学習データセットを生成")
    add_experiment_arguments(parser)
    parser.set_defaults(handler=run, command="generate")


def generate_dataset(config: ExperimentConfig) -> Dataset:
    """設定の初期条件から軌道を積分し、ノイズ付きデータセットを作る"""
    if not config.ics:
        raise InvalidParameterError("--ics is required (or use --system oscillator|pendulum)")
    return make_dataset(config.build_system(), config.ics, config.trajectory_spec(), config.noise_spec())


def run(args: argparse.Namespace) -> int:
    config = build_config(args)
    dataset = generate_dataset(config)
    with guarded_output(output_dir(config), "generate") as out:
        path = DatasetManager().save_dataset(
            dataset, out / artifact_name("dataset", dataset.meta.system, seed=config.seed)
        )
    print(f"N={dataset.n_samples}")
    print(f"✅ dataset: {path}")
    return 0
