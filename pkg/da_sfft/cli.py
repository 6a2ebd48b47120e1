import argparse
import importlib
import sys
from typing import Callable, Optional

from da_sfft import hooks
from da_sfft.api import configure_logging, logger
from da_sfft.api.errors import FrozenParameterError, GradientCheckError, StateError
from da_sfft.api.harness.config import RunConfig

EXIT_FAILURE = 1
EXIT_ERROR = 2


def _resolve(path: str) -> Callable[[argparse.Namespace], int]:
    module, name = path.rsplit(".", 1)
    return getattr(importlib.import_module(module), name)


def _add_config_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="key = value run configuration file")

    for key in RunConfig.fields():
        if key == "master_seed":
            parser.add_argument("--seed", "--master-seed", dest=key)
        else:
            parser.add_argument("--" + key.replace("_", "-"), dest=key)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="da_sfft", description=hooks.app_description)
    parser.add_argument("--log-level", default="INFO")
    commands = parser.add_subparsers(dest="command", required=True)

    facegen = commands.add_parser("facegen", help="generate a synthetic face corpus")
    facegen.add_argument("--seed", type=int, required=True)
    facegen.add_argument("--count", type=int, required=True)
    facegen.add_argument("--res", type=int, default=64)
    facegen.add_argument("--out", required=True)

    degrade = commands.add_parser("degrade", help="degrade a corpus with the heavy-rain model")
    degrade.add_argument("--manifest", required=True)
    degrade.add_argument("--seed", type=int, required=True)
    degrade.add_argument("--m-min", dest="m_min", type=int, default=1)
    degrade.add_argument("--m-max", dest="m_max", type=int, default=3)
    degrade.add_argument("--out", required=True)
    degrade.add_argument("--dump-layers", action="store_true")

    for name, help_text in (("pretrain-encoder", "pretrain and freeze the HQ encoder"),
                            ("align-dafe", "align the LQ encoder to the HQ encoder"),
                            ("train", "adversarial training of the generator"),
                            ("ablation", "train every ablation configuration and compare them")):
        stage = commands.add_parser(name, help=help_text)
        _add_config_flags(stage)
        stage.add_argument("--manifest", help="degraded training manifest instead of a synthesized corpus")
        if name == "ablation":
            stage.add_argument("--report")

    restore = commands.add_parser("restore", help="restore degraded images")
    restore.add_argument("--model", required=True)
    restore.add_argument("--in", dest="input")
    restore.add_argument("--parsing")
    restore.add_argument("--manifest")
    restore.add_argument("--out", required=True)

    evaluate = commands.add_parser("eval", help="PSNR/SSIM evaluation on a degraded manifest")
    _add_config_flags(evaluate)
    evaluate.add_argument("--model", required=True)
    evaluate.add_argument("--manifest", required=True)
    evaluate.add_argument("--csv", required=True)

    gradcheck = commands.add_parser("gradcheck", help="run the finite-difference gradient suite")
    gradcheck.add_argument("--seed", type=int, default=0)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(level=args.log_level.upper())

    handler = _resolve(hooks.commands[args.command])

    try:
        return handler(args)
    except GradientCheckError as e:
        logger.error(str(e))
        return EXIT_FAILURE
    except (ValueError, StateError, FrozenParameterError, OSError) as e:
        logger.error(args.command + " failed: " + str(e))
        logger.debug("Traceback", exc_info=True)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
