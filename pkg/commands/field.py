"""
field サブコマンド - 位相図用にベクトル場を格子上でサンプリング
"""
import argparse
from pathlib import Path

from aggregators.evaluation import field_grid, symmetric_box
from managers.model_manager import ModelManager
from models.schemas import Box
from utils.export import artifact_name, export_to_csv
from .dependencies import add_experiment_arguments, build_config, build_model_config, guarded_output, output_dir


def parse_box(text: str) -> Box:
    try:
        return Box.from_string(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def register(subparsers) -> None:
    parser = subparsers.add_parser("field", help="ベクトル場を格子上で書き出す")
    parser.add_argument("--model", type=Path, default=None, help="学習済みモデル JSON（省略時は真の系）")
    parser.add_argument("--box", type=parse_box, default=None, help="x1min,x1max,x2min,x2max")
    parser.add_argument("--nx", type=int, default=21)
    parser.add_argument("--ny", type=int, default=21)
    add_experiment_arguments(parser)
    parser.set_defaults(handler=run, command="field")


def run(args: argparse.Namespace) -> int:
    if args.model is not None:
        model = ModelManager().load_model(args.model)
        config = build_model_config(args, model)
        system = config.build_system()
        field, label = model.field, model.family.value
    else:
        config = build_config(args)
        system = config.build_system()
        field, label = system.field, "true"

    box = args.box or symmetric_box(system.portrait_box)
    grid = field_grid(field, box, args.nx, args.ny)
    with guarded_output(output_dir(config), "field") as out:
        path = export_to_csv(grid, out / artifact_name("field", system.name, label, config.seed))
    print(f"rows={len(grid)}")
    print(f"✅ field: {path}")
    return 0
