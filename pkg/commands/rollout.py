"""
rollout サブコマンド - 真の系と学習モデルを同じ初期点から積分して比較
"""
import argparse
from pathlib import Path

from collectors.simulator import rollout_error
from managers.model_manager import ModelManager
from utils.export import artifact_name, export_rollout
from .dependencies import add_experiment_arguments, build_model_config, guarded_output, output_dir, require


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "rollout",
        help="テスト軌道の誤差を計算",
        description="--t-end / --dt はここではテスト軌道の終端時刻と刻みを指す",
    )
    parser.add_argument("--model", type=Path, required=True, help="学習済みモデル JSON")
    add_experiment_arguments(parser)
    parser.set_defaults(handler=run, command="rollout")


def run(args: argparse.Namespace) -> int:
    model = ModelManager().load_model(args.model)
    # --t-end / --dt は学習データの設定には渡さない
    recipe_args = argparse.Namespace(**{**vars(args), "t_end": None, "dt": None})
    config = build_model_config(recipe_args, model)
    system = config.build_system()
    x0 = require(config.x0, "--x0")
    t_end = args.t_end if args.t_end is not None else require(config.test_t_end, "--t-end")
    h = args.dt if args.dt is not None else config.test_dt

    result = rollout_error(system, model, x0, h, t_end)
    with guarded_output(output_dir(config), "rollout") as out:
        path = export_rollout(
            result, out / artifact_name("rollout", system.name, model.family.value, config.seed)
        )
    print(f"mean_err={result.mean_error!r}")
    print(f"✅ rollout: {path}")
    return 0
