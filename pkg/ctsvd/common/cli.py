"""Shared plumbing for the programs under scripts/."""

import argparse
import logging
import psutil
import sys
from typing import Callable, Tuple

from ctsvd.common.errors import ConjugateSymmetryError, NumericalError, TensorFileError
from ctsvd.core.transforms import TransformKind

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_NUMERICAL = 3


class ArgumentParser(argparse.ArgumentParser):
    """argparse that exits with EXIT_USAGE on bad arguments."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def add_verbose_arg(p: argparse.ArgumentParser):
    p.add_argument(
        "-v",
        "--verbose",
        dest="verbose",
        action="store_true",
        help="Enable DEBUG-level logging (default is INFO).",
    )


def setup_logging(verbose: bool = False):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
    )


def run_cli(fn: Callable[[], int]) -> int:
    """Run fn and map failures to exit codes, logging the message."""
    try:
        return fn()
    except (NumericalError, ConjugateSymmetryError) as e:
        logger.error("Numerical failure: %s", e)
        return EXIT_NUMERICAL
    except (TensorFileError, OSError) as e:
        logger.error("I/O error: %s", e)
        return EXIT_IO
    except (ValueError, IndexError) as e:
        logger.error("Invalid arguments: %s", e)
        return EXIT_USAGE


def log_memory(logger, message=""):
    """Log the current memory usage."""
    mem_usage_gb = psutil.Process().memory_info().rss / 1024**3
    logger.info("Current memory usage: %.2f GB %s", mem_usage_gb, message)


def check_memory(nbytes: int, what: str, fraction: float = 0.5):
    """Refuse work needing more than `fraction` of the available memory."""
    available = psutil.virtual_memory().available
    if nbytes > fraction * available:
        raise ValueError(
            f"{what} needs ~{nbytes / 1024**3:.2f} GB, more than "
            f"{fraction:.0%} of the {available / 1024**3:.2f} GB available"
        )


METHODS = {
    "dct": TransformKind.DCT_ORTHO,
    "dct-diag": TransformKind.DCT_DIAG,
    "dft": TransformKind.DFT,
}


def parse_dims(text: str) -> Tuple[int, int, int]:
    """Parse "m1xm2xm3" (e.g. "100x100x400")."""
    parts = text.lower().split("x")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"Expected m1xm2xm3, got {text!r}")
    try:
        dims = tuple(int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected integer dims, got {text!r}")
    if min(dims) < 1:
        raise argparse.ArgumentTypeError(f"Dims must be positive, got {text!r}")
    return dims
