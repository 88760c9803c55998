"""Command-line entry point: `slenderflow <command> --config <path>`.

Commands map one-to-one to the experiment runners; each validates its
config before any heavy computation and exits nonzero when a fixture
tolerance is violated.
"""

import argparse
import os
import sys

from . import config as config_mod
from . import experiments


def _add_common(parser):
    parser.add_argument("--config", required=True, help="JSON experiment config")
    parser.add_argument("--out", default=None, help="output directory (default: config or cwd)")
    parser.add_argument("--threads", type=int, default=None,
                        help="BLAS thread cap for the linear algebra stages")
    parser.add_argument("--qn", type=int, default=None,
                        help="override the quadrature parameter from the config")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="slenderflow",
        description="Boundary-integral experiments for closed slender fibers in Stokes flow",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in experiments.RUNNERS:
        cmd = sub.add_parser(name.replace("_", "-"), help=f"run the {name} experiment")
        cmd.set_defaults(experiment=name)
        _add_common(cmd)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.threads is not None:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(args.threads)
    try:
        cfg = config_mod.load(args.config)
    except config_mod.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if cfg.experiment != args.experiment:
        print(
            f"config error: {args.config}: $.experiment: is {cfg.experiment!r}, "
            f"command expects {args.experiment!r}",
            file=sys.stderr,
        )
        return 2
    if args.qn is not None:
        cfg.raw.setdefault("resolution", {})["qn"] = args.qn
    out_dir = args.out or cfg.get("output_dir", ".")
    os.makedirs(out_dir, exist_ok=True)
    _, summary, ok = experiments.RUNNERS[cfg.experiment](cfg, out_dir)
    if "pass" in summary:
        print(f"{cfg.experiment}: {'pass' if ok else 'FAIL'} (outputs in {out_dir})")
    else:
        print(f"{cfg.experiment}: done (outputs in {out_dir})")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
