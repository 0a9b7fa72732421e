"""
ハミルトン系ベクトル場のカーネル学習
コマンドラインエントリポイント
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from commands import evaluate, field, generate, repro, rollout, train, tune
from commands.dependencies import join_negative_values
from core import HamKernelError, settings
from core.log_config import setup_logging

logger = logging.getLogger(__name__)

SUBCOMMANDS = (generate, tune, train, rollout, evaluate, field, repro)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.app_name,
        description="シンプレクティック・奇関数カーネルによるハミルトン系ベクトル場の学習",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.app_version}")
    parser.add_argument("--config", type=Path, default=None, help="実験レシピ JSON（フラグで上書き可能）")
    parser.add_argument("--log-level", dest="log_level", default=None, help="DEBUG / INFO / WARNING / ERROR")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    for module in SUBCOMMANDS:
        module.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    CLI を実行

    Returns:
        終了ステータス（0: 成功, 2: 入力・契約違反, 1: 予期しないエラー）
    """
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(join_negative_values(argv))
    setup_logging(args.log_level)

    try:
        return args.handler(args)
    except ValidationError as e:
        logger.error("%s: invalid configuration", args.command)
        for error in e.errors():
            location = ".".join(str(part) for part in error["loc"]) or "config"
            print(f"❌ {location}: {error['msg']}", file=sys.stderr)
        return 2
    except HamKernelError as e:
        logger.error("%s failed: %s", args.command, e)
        print(f"❌ {e}", file=sys.stderr)
        return 2
    except Exception as e:
        logger.error("unexpected error in %s: %s", args.command, e, exc_info=True)
        print(f"❌ unexpected error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
