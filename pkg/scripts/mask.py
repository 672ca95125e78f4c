import argparse
import logging
import sys
from typing import List, Optional

from ctsvd.common import cli
from ctsvd.common.tensor_file import write_mask
from ctsvd.completion.masks import make_mask

logger = logging.getLogger(__name__)


def get_cmd_args(argv: Optional[List[str]] = None):
    p = cli.ArgumentParser(description="Draw a uniform random observation mask.")
    p.add_argument(
        "-d",
        "--dims",
        dest="dims",
        type=cli.parse_dims,
        required=True,
        help="Tensor dims as m1xm2xm3, e.g. 16x16x8.",
    )
    p.add_argument(
        "--sr",
        dest="sr",
        type=float,
        required=True,
        help="Sampling rate in [0, 1].",
    )
    p.add_argument(
        "--seed",
        dest="seed",
        type=int,
        default=0,
        help="Random seed; the same seed always gives the same mask.",
    )
    p.add_argument(
        "-o",
        "--output",
        dest="output",
        type=str,
        required=True,
        help="Mask TensorFile to write (1.0 observed, 0.0 missing).",
    )
    cli.add_verbose_arg(p)
    return p.parse_args(argv)


def check_args(args: argparse.Namespace) -> argparse.Namespace:
    if not 0.0 <= args.sr <= 1.0:
        raise ValueError(f"--sr must be in [0, 1], got {args.sr}")
    return args


def run_main(args: argparse.Namespace) -> int:
    mask = make_mask(args.dims, args.sr, args.seed)
    write_mask(args.output, mask)
    logger.info("Wrote %s to %s", mask, args.output)
    return cli.EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = get_cmd_args(argv)
    cli.setup_logging(args.verbose)
    return cli.run_cli(lambda: run_main(check_args(args)))


if __name__ == "__main__":
    sys.exit(main())
