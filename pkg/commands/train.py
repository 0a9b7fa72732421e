"""
train サブコマンド - 固定した (σ, λ) でモデルを学習して保存
"""
import argparse
from pathlib import Path

from analyzers.regression import KernelRegressor
from managers.dataset_manager import DatasetManager
from managers.model_manager import ModelManager
from utils.export import artifact_name
from .dependencies import add_experiment_arguments, build_config, guarded_output, output_dir, require


def register(subparsers) -> None:
    parser = subparsers.add_parser("train", help="モデルを学習")
    parser.add_argument("--dataset", type=Path, required=True, help="データセット CSV")
    add_experiment_arguments(parser)
    parser.set_defaults(handler=run, command="train")


def run(args: argparse.Namespace) -> int:
    config = build_config(args)
    lam = require(config.lam, "--lambda")
    dataset = DatasetManager().load_dataset(args.dataset)
    spec = config.kernel_spec(dim=dataset.dim)
    model = KernelRegressor(spec, lam).fit(dataset)

    system = dataset.meta.system if dataset.meta is not None else config.system
    with guarded_output(output_dir(config), "train") as out:
        path = ModelManager().save_model(
            model, out / artifact_name("model", system, spec.family.value, config.seed, ext="json")
        )
    if model.jitter > 0:
        print(f"jitter={model.jitter!r}")
    print(f"✅ model: {path}")
    return 0
