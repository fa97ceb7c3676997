"""
Twist - Main Application
Command-line front end: parses arguments, loads the configuration, sets up
logging and hands the command to SimulationController.
"""

import argparse
import logging
import sys
from typing import List, Optional

from app.components.core_types import Method
from app.main.main_controller import EXIT_CONFIG, Command, SimulationController
from app.setup.system_checker import ConfigManager, SystemChecker
from app.utils.exceptions import ConfigError
from app.utils.translation_manager import get_translation_manager, set_language, tr

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=tr("cli.help.config"))
    common.add_argument("--out-dir", help=tr("cli.help.out_dir"))
    common.add_argument("--method", choices=[m.value for m in Method], help=tr("cli.help.method"))
    common.add_argument("--dt", type=float, help=tr("cli.help.dt"))
    common.add_argument("--t-final", type=float, help=tr("cli.help.t_final"))
    common.add_argument("--gradient", type=float, help=tr("cli.help.gradient"))
    common.add_argument("--seed", type=int, help=tr("cli.help.seed"))
    common.add_argument("-v", "--verbose", action="store_true", help=tr("cli.help.verbose"))

    parser = argparse.ArgumentParser(prog="twist", description=tr("cli.description"))
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in Command:
        subparsers.add_parser(command.value, parents=[common], help=tr(f"cli.commands.{command.value}"))
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format=LOG_FORMAT,
        stream=sys.stderr,
    )
    # numba's compiler logs are noise at DEBUG
    logging.getLogger("numba").setLevel(logging.WARNING)

    try:
        manager = ConfigManager(args.config)
        config = manager.apply_overrides(
            method=args.method,
            dt=args.dt,
            t_final=args.t_final,
            gradient=args.gradient,
            seed=args.seed,
            out_dir=args.out_dir,
        )
    except ConfigError as e:
        print(tr("run.invalid_config", error=str(e)), file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as e:
        print(tr("config.errors.file_not_found", path=str(e)), file=sys.stderr)
        return EXIT_CONFIG

    if not set_language(config.language):
        catalogs = get_translation_manager()
        logger.warning(
            "language %r not available (have %s), keeping %r",
            config.language, ", ".join(catalogs.get_available_languages()), catalogs.get_current_language(),
        )

    ok, key, kwargs = SystemChecker().check_dependencies()
    if ok:
        logger.debug(tr(key, **kwargs))
    else:
        logger.warning(tr(key, **kwargs))

    result = SimulationController(config).run(args.command)
    if result.success:
        for path in result.files:
            print(path)
        logger.info(result.message)
    else:
        print(result.message, file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
