import argparse
import logging
import sys
from typing import List, Optional

from ctsvd.common import cli
from ctsvd.common.metrics import evaluate
from ctsvd.common.reports import dumps, write_json
from ctsvd.common.tensor_file import read_tensor

logger = logging.getLogger(__name__)


def get_cmd_args(argv: Optional[List[str]] = None):
    p = cli.ArgumentParser(
        description="Compare an estimate against a reference tensor (PSNR, SSIM, SAM, ERGAS)."
    )
    p.add_argument(
        "-r",
        "--reference",
        dest="reference",
        type=str,
        required=True,
        help="Ground-truth TensorFile.",
    )
    p.add_argument(
        "-e",
        "--estimate",
        dest="estimate",
        type=str,
        required=True,
        help="Recovered TensorFile.",
    )
    p.add_argument(
        "--ratio",
        dest="ratio",
        type=float,
        default=1.0,
        help="ERGAS resolution ratio (1 for completion).",
    )
    p.add_argument(
        "--report",
        dest="report",
        type=str,
        default=None,
        help="JSON file for the metric report (default: print to stdout).",
    )
    cli.add_verbose_arg(p)
    return p.parse_args(argv)


def check_args(args: argparse.Namespace) -> argparse.Namespace:
    if not args.ratio > 0:
        raise ValueError(f"--ratio must be > 0, got {args.ratio}")
    return args


def run_main(args: argparse.Namespace) -> int:
    reference = read_tensor(args.reference)
    estimate = read_tensor(args.estimate)
    if reference.dims != estimate.dims:
        raise ValueError(f"Reference {reference.dims} and estimate {estimate.dims} differ")
    report = evaluate(reference, estimate, ratio=args.ratio)
    logger.info(
        "%s: PSNR %.2f dB, SSIM %.4f, SAM %.4f, ERGAS %.4f",
        args.estimate,
        report.psnr_mean,
        report.ssim_mean,
        report.sam,
        report.ergas,
    )
    payload = report.to_dict()
    payload.pop("times")
    if args.report:
        write_json(args.report, payload)
    else:
        print(dumps(payload))
    return cli.EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = get_cmd_args(argv)
    cli.setup_logging(args.verbose)
    return cli.run_cli(lambda: run_main(check_args(args)))


if __name__ == "__main__":
    sys.exit(main())
