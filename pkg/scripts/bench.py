"""Stage timings of DFT vs DCT t-SVD, plus the smooth-tube accuracy check.

For every size the CSV has one row per method with the mean wall time of
the transform stage, the SVD stage and the whole t-SVD over --runs runs,
after --warmup runs that are discarded.
"""

import argparse
import logging
import pandas as pd
import sys
import time
from tqdm import tqdm
from typing import List, Optional, Tuple

from ctsvd.common import cli
from ctsvd.common.metrics import evaluate, json_float
from ctsvd.common.reports import write_csv, write_json
from ctsvd.common.timing import StageTimes
from ctsvd.completion.admm import SolverConfig, admm_complete
from ctsvd.completion.masks import make_mask
from ctsvd.completion.synthetic import random_tensor, smooth_tubes, tubal_rank_one
from ctsvd.completion.sweep import beta_sweep
from ctsvd.core.transforms import TransformKind, TubeTransform
from ctsvd.core.tsvd import t_svd

logger = logging.getLogger(__name__)

DEFAULT_SIZES = ["100x100x100", "100x100x400", "200x200x100", "400x400x100"]
BENCH_METHODS = [TransformKind.DFT, TransformKind.DCT_ORTHO]
CSV_COLUMNS = ["size", "method", "transform", "svd", "total", "runs"]
RATIO_LIMIT = 0.75


def get_cmd_args(argv: Optional[List[str]] = None):
    p = cli.ArgumentParser(description="Benchmark DFT and DCT t-SVD stage timings.")
    p.add_argument(
        "--sizes",
        dest="sizes",
        type=cli.parse_dims,
        nargs="+",
        default=[cli.parse_dims(s) for s in DEFAULT_SIZES],
        help="Tensor sizes as m1xm2xm3 (default: %s)." % " ".join(DEFAULT_SIZES),
    )
    p.add_argument(
        "--runs",
        dest="runs",
        type=int,
        default=3,
        help="Timed runs per size and method.",
    )
    p.add_argument(
        "--warmup",
        dest="warmup",
        type=int,
        default=1,
        help="Untimed runs before the timed ones.",
    )
    p.add_argument(
        "--seed",
        dest="seed",
        type=int,
        default=0,
        help="Random seed for the benchmark tensors.",
    )
    p.add_argument(
        "-o",
        "--output",
        dest="output",
        type=str,
        required=True,
        help="CSV file for the timing table.",
    )
    p.add_argument(
        "--summary",
        dest="summary",
        type=str,
        default=None,
        help="JSON file with DCT/DFT stage ratios and the smooth-tube check.",
    )
    p.add_argument(
        "--smooth-check",
        dest="smooth_check",
        action="store_true",
        help="Complete a smooth-tube tensor at SR 0.1 with both methods and "
        "compare mean PSNR.",
    )
    p.add_argument(
        "--smooth-dims",
        dest="smooth_dims",
        type=cli.parse_dims,
        default=(32, 32, 16),
        help="Dims of the smooth-tube tensor (default 32x32x16).",
    )
    p.add_argument(
        "--beta-sweep",
        dest="betas",
        type=float,
        nargs="+",
        default=None,
        help="Beta values to sweep on a 16x16x8 tubal-rank-1 problem at SR 0.6.",
    )
    p.add_argument(
        "--sweep-output",
        dest="sweep_output",
        type=str,
        default=None,
        help="CSV file for the beta sweep table.",
    )
    cli.add_verbose_arg(p)
    return p.parse_args(argv)


def check_args(args: argparse.Namespace) -> argparse.Namespace:
    if args.runs < 1:
        raise ValueError(f"--runs must be >= 1, got {args.runs}")
    if args.warmup < 0:
        raise ValueError(f"--warmup must be >= 0, got {args.warmup}")
    if args.betas is not None:
        if any(b <= 0 for b in args.betas):
            raise ValueError(f"--beta-sweep values must be > 0, got {args.betas}")
        if args.sweep_output is None:
            raise ValueError("--beta-sweep needs --sweep-output")
    for dims in args.sizes:
        cli.check_memory(tsvd_bytes(dims), f"t-SVD of {format_size(dims)}")
    return args


def format_size(dims: Tuple[int, int, int]) -> str:
    return "x".join(str(d) for d in dims)


def tsvd_bytes(dims: Tuple[int, int, int]) -> int:
    """Rough peak memory of one t-SVD: complex spectra of X, U, S and V."""
    m1, m2, m3 = dims
    return 16 * m3 * (m1 * m1 + m2 * m2 + 2 * m1 * m2)


def time_tsvd(x, kind: TransformKind, runs: int, warmup: int) -> StageTimes:
    """Mean stage times of t_svd over `runs` runs after `warmup` discarded ones."""
    t = TubeTransform(kind, x.dims[2])
    for _ in range(warmup):
        t_svd(x, t)
    total = StageTimes()
    for _ in range(runs):
        times = StageTimes()
        t_svd(x, t, times)
        total.add(times)
    return StageTimes(total.transform / runs, total.svd / runs, total.total / runs)


def bench_sizes(
    sizes: List[Tuple[int, int, int]], runs: int, warmup: int, seed: int = 0
) -> pd.DataFrame:
    rows = []
    for dims in tqdm(sizes, desc="sizes"):
        x = random_tensor(dims, seed)
        for kind in BENCH_METHODS:
            times = time_tsvd(x, kind, runs, warmup)
            rows.append(
                {
                    "size": format_size(dims),
                    "method": kind.value,
                    **times.to_dict(),
                    "runs": runs,
                }
            )
            tqdm.write(
                f"{format_size(dims)} {kind.value}: transform {times.transform:.4f} s, "
                f"svd {times.svd:.4f} s, total {times.total:.4f} s"
            )
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def stage_ratios(df: pd.DataFrame) -> dict:
    """Per size, DCT time over DFT time for the SVD stage and the total.

    `within_limit` is true when both ratios are at most RATIO_LIMIT.
    """
    out = {}
    for size, group in df.groupby("size", sort=False):
        by_method = group.set_index("method")
        dct = by_method.loc[TransformKind.DCT_ORTHO.value]
        dft = by_method.loc[TransformKind.DFT.value]
        svd_ratio = float(dct["svd"] / dft["svd"]) if dft["svd"] > 0 else None
        total_ratio = float(dct["total"] / dft["total"]) if dft["total"] > 0 else None
        out[size] = {
            "svd_ratio": svd_ratio,
            "total_ratio": total_ratio,
            "within_limit": all(
                r is not None and r <= RATIO_LIMIT for r in (svd_ratio, total_ratio)
            ),
        }
    return out


def warn_on_ratios(ratios: dict):
    for size, r in ratios.items():
        if not r["within_limit"]:
            logger.warning(
                "%s: DCT/DFT svd ratio %s, total ratio %s (limit %.2f)",
                size,
                r["svd_ratio"],
                r["total_ratio"],
                RATIO_LIMIT,
            )


def smooth_check(dims: Tuple[int, int, int], sr: float = 0.1, seed: int = 0) -> dict:
    """Mean PSNR of DCT and DFT completion on a smooth-tube tensor.

    DCT is expected to win on smooth non-periodic tubes; losing is logged
    as a warning, not treated as a failure.
    """
    x = smooth_tubes(*dims, seed=seed)
    mask = make_mask(dims, sr, seed).observe(x)
    psnrs = {}
    for kind in (TransformKind.DCT_ORTHO, TransformKind.DFT):
        recovered, _ = admm_complete(mask, SolverConfig(transform=kind, seed=seed))
        psnrs[kind.value] = evaluate(x, recovered).psnr_mean
    dct_wins = psnrs[TransformKind.DCT_ORTHO.value] >= psnrs[TransformKind.DFT.value]
    if not dct_wins:
        logger.warning(
            "Smooth-tube check: DCT PSNR %.2f dB below DFT PSNR %.2f dB",
            psnrs[TransformKind.DCT_ORTHO.value],
            psnrs[TransformKind.DFT.value],
        )
    return {
        "dims": list(dims),
        "sampling_rate": sr,
        "seed": seed,
        "psnr_mean": {k: json_float(v) for k, v in psnrs.items()},
        "dct_wins": bool(dct_wins),
    }


def run_main(args: argparse.Namespace) -> int:
    t1 = time.time()
    df = bench_sizes(args.sizes, args.runs, args.warmup, args.seed)
    write_csv(args.output, df)
    cli.log_memory(logger, "after timing runs")
    summary = {
        "runs": args.runs,
        "warmup": args.warmup,
        "ratios": stage_ratios(df),
        "ratio_limit": RATIO_LIMIT,
    }
    warn_on_ratios(summary["ratios"])
    t2 = time.time()
    logger.info("Timing runs took %.1f seconds.", t2 - t1)

    if args.smooth_check:
        summary["smooth_check"] = smooth_check(args.smooth_dims, seed=args.seed)
    if args.betas is not None:
        x = tubal_rank_one(16, 16, 8, seed=args.seed)
        mask = make_mask(x.dims, 0.6, args.seed).observe(x)
        sweep = beta_sweep(mask, args.betas, SolverConfig(seed=args.seed), x)
        write_csv(args.sweep_output, sweep)
    if args.summary:
        write_json(args.summary, summary)
    logger.info("Total time: %.1f seconds.", time.time() - t1)
    return cli.EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = get_cmd_args(argv)
    cli.setup_logging(args.verbose)
    return cli.run_cli(lambda: run_main(check_args(args)))


if __name__ == "__main__":
    sys.exit(main())
