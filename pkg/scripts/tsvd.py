import argparse
import logging
import sys
from typing import List, Optional

from ctsvd.common import cli
from ctsvd.common.reports import write_json
from ctsvd.common.tensor_file import read_tensor, write_tensor
from ctsvd.common.timing import StageTimes
from ctsvd.core.transforms import TubeTransform
from ctsvd.core.tsvd import multi_rank, t_svd, tnn

logger = logging.getLogger(__name__)


def get_cmd_args(argv: Optional[List[str]] = None):
    p = cli.ArgumentParser(description="Factor a tensor as U * S * V^T (t-SVD).")
    p.add_argument(
        "-i",
        "--input",
        dest="input",
        type=str,
        required=True,
        help="TensorFile to factor.",
    )
    p.add_argument(
        "-m",
        "--method",
        dest="method",
        choices=sorted(cli.METHODS),
        default="dct",
        help="Tube transform used for the factorization.",
    )
    p.add_argument(
        "-o",
        "--output-prefix",
        dest="prefix",
        type=str,
        required=True,
        help="Writes <prefix>.u.t3f, <prefix>.s.t3f and <prefix>.v.t3f.",
    )
    p.add_argument(
        "--report",
        dest="report",
        type=str,
        default=None,
        help="Multi-rank JSON report (default <prefix>.ranks.json).",
    )
    p.add_argument(
        "--rank-tol",
        dest="rank_tol",
        type=float,
        default=None,
        help="Relative singular value cutoff for the multi-rank "
        "(default max(m1, m2) * 2^-52).",
    )
    cli.add_verbose_arg(p)
    return p.parse_args(argv)


def check_args(args: argparse.Namespace) -> argparse.Namespace:
    if args.rank_tol is not None and args.rank_tol < 0:
        raise ValueError(f"--rank-tol must be >= 0, got {args.rank_tol}")
    if args.report is None:
        args.report = f"{args.prefix}.ranks.json"
    return args


def run_main(args: argparse.Namespace) -> int:
    x = read_tensor(args.input)
    t = TubeTransform(cli.METHODS[args.method], x.dims[2])
    times = StageTimes()
    factors = t_svd(x, t, times)
    for name, part in (("u", factors.u), ("s", factors.s), ("v", factors.v)):
        write_tensor(f"{args.prefix}.{name}.t3f", part)
    ranks = multi_rank(x, t, args.rank_tol)
    logger.info(
        "t-SVD of %s under %s: tubal rank %d, took %.1f seconds.",
        x,
        t,
        ranks.tubal_rank,
        times.total,
    )
    payload = {
        "input": args.input,
        "method": args.method,
        "dims": list(x.dims),
        "tnn": tnn(x, t),
        "times": times.to_dict(),
        **ranks.to_dict(),
    }
    write_json(args.report, payload)
    return cli.EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = get_cmd_args(argv)
    cli.setup_logging(args.verbose)
    return cli.run_cli(lambda: run_main(check_args(args)))


if __name__ == "__main__":
    sys.exit(main())
