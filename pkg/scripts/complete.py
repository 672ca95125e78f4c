import argparse
import logging
import sys
import time
from typing import List, Optional

from ctsvd.common import cli
from ctsvd.common.metrics import evaluate, tube_trace
from ctsvd.common.reports import RunReport, write_json
from ctsvd.common.tensor_file import read_mask, read_tensor, write_tensor
from ctsvd.completion.admm import SolverConfig, admm_complete
from ctsvd.completion.masks import make_mask

logger = logging.getLogger(__name__)


def get_cmd_args(argv: Optional[List[str]] = None):
    p = cli.ArgumentParser(
        description="Complete a partially observed third-order tensor by TNN minimization."
    )
    p.add_argument(
        "-i",
        "--input",
        dest="input",
        type=str,
        required=True,
        help="TensorFile holding the observed tensor (values off the mask are ignored).",
    )
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument(
        "--mask",
        dest="mask",
        type=str,
        default=None,
        help="Mask TensorFile with 1.0 at observed entries and 0.0 elsewhere.",
    )
    source.add_argument(
        "--sr",
        dest="sr",
        type=float,
        default=None,
        help="Sampling rate in [0, 1]; draws a uniform mask with --seed.",
    )
    p.add_argument(
        "--seed",
        dest="seed",
        type=int,
        default=0,
        help="Random seed for the mask drawn with --sr.",
    )
    p.add_argument(
        "-m",
        "--method",
        dest="method",
        choices=sorted(cli.METHODS),
        default="dct",
        help="Tube transform: dct (TNN-C), dft (TNN-F) or dct-diag.",
    )
    p.add_argument(
        "--beta",
        dest="beta",
        type=float,
        default=1e-2,
        help="ADMM penalty parameter beta.",
    )
    p.add_argument(
        "--preset",
        dest="preset",
        choices=["algorithm", "experiment"],
        default="algorithm",
        help="Tolerance preset: algorithm (1e-5) or experiment (1e-8).",
    )
    p.add_argument(
        "--tol",
        dest="tol",
        type=float,
        default=None,
        help="Stopping tolerance on the relative change of X; overrides --preset.",
    )
    p.add_argument(
        "--max-iters",
        dest="max_iters",
        type=int,
        default=500,
        help="Maximum number of ADMM iterations.",
    )
    p.add_argument(
        "-o",
        "--output",
        dest="output",
        type=str,
        required=True,
        help="TensorFile to write the recovered tensor to.",
    )
    p.add_argument(
        "--report",
        dest="report",
        type=str,
        default=None,
        help="JSON run report to write.",
    )
    p.add_argument(
        "--reference",
        dest="reference",
        type=str,
        default=None,
        help="Ground-truth TensorFile; adds PSNR/SSIM/SAM/ERGAS to the report.",
    )
    p.add_argument(
        "--tube",
        dest="tube",
        type=int,
        nargs=2,
        metavar=("I", "J"),
        default=None,
        help="0-based tube (i, j) whose true and recovered values go in the report.",
    )
    p.add_argument(
        "--progress",
        dest="progress",
        action="store_true",
        help="Show a progress bar over ADMM iterations.",
    )
    cli.add_verbose_arg(p)
    return p.parse_args(argv)


def check_args(args: argparse.Namespace) -> argparse.Namespace:
    """Check the command line arguments and return the updated args."""
    if args.sr is not None and not 0.0 <= args.sr <= 1.0:
        raise ValueError(f"--sr must be in [0, 1], got {args.sr}")
    kwargs = dict(
        beta=args.beta,
        max_iters=args.max_iters,
        transform=cli.METHODS[args.method],
        seed=args.seed if args.sr is not None else None,
    )
    if args.tol is not None:
        kwargs["tol"] = args.tol
    if args.preset == "experiment":
        args.config = SolverConfig.experiment(**kwargs)
    else:
        args.config = SolverConfig(**kwargs)
    return args


def run_main(args: argparse.Namespace) -> int:
    """Read, complete, write the tensor and its report."""
    t1 = time.time()
    observed = read_tensor(args.input)
    if args.mask is not None:
        mask = read_mask(args.mask, observed)
    else:
        mask = make_mask(observed.dims, args.sr, args.seed).observe(observed)
    reference = read_tensor(args.reference) if args.reference else None
    if reference is not None and reference.dims != observed.dims:
        raise ValueError(f"Reference {reference.dims} does not match input {observed.dims}")
    logger.info(
        "Completing %s from %d observed entries (SR=%.3f) with %s",
        observed,
        mask.count,
        mask.sampling_rate,
        args.method,
    )
    t2 = time.time()
    logger.info("Reading inputs took %.1f seconds.", t2 - t1)

    x, state = admm_complete(mask, args.config, progress=args.progress)
    write_tensor(args.output, x)

    metrics = evaluate(reference, x, state.times) if reference is not None else None
    trace = None
    if args.tube is not None:
        trace = tube_trace(reference if reference is not None else observed, x, *args.tube)

    if args.report:
        report = RunReport(
            method=args.method,
            config=args.config.to_dict(),
            sampling_rate=mask.sampling_rate,
            seed=args.config.seed,
            input=args.input,
            mask=args.mask,
            iterations=state.iteration,
            converged=state.converged,
            hit_max_iters=state.hit_max_iters,
            history=state.history,
            primal_residual=state.primal_residual,
            objective=state.objective,
            times=state.times,
            metrics=metrics,
            tube_trace=trace,
        )
        write_json(args.report, report.to_dict())
    if metrics is not None:
        logger.info(
            "PSNR %.2f dB, SSIM %.4f, relative error %.3e",
            metrics.psnr_mean,
            metrics.ssim_mean,
            metrics.relative_error,
        )
    logger.info("Total time: %.1f seconds.", time.time() - t1)
    return cli.EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = get_cmd_args(argv)
    cli.setup_logging(args.verbose)
    return cli.run_cli(lambda: run_main(check_args(args)))


if __name__ == "__main__":
    sys.exit(main())
