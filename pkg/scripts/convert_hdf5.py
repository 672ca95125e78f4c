"""Convert an HDF5 / MATLAB v7.3 dataset into a TensorFile.

MATLAB v7.3 .mat files are HDF5 with column-major arrays, so an
m1 x m2 x m3 MATLAB variable shows up in h5py with shape (m3, m2, m1);
pass --matlab to undo that. Otherwise the dataset is read as X[i, j, k],
or as slice-major (m3, m1, m2) with --layout kij.
"""

import argparse
import fsspec
import h5py
import logging
import numpy as np
import sys
from typing import List, Optional

from ctsvd.common import cli
from ctsvd.common.tensor_file import write_tensor
from ctsvd.core.tensor import Tensor3

logger = logging.getLogger(__name__)


def get_cmd_args(argv: Optional[List[str]] = None):
    p = cli.ArgumentParser(description="Convert an HDF5 dataset to a TensorFile.")
    p.add_argument(
        "-i",
        "--input",
        dest="input",
        type=str,
        required=True,
        help="HDF5 or MATLAB v7.3 file (any fsspec URL).",
    )
    p.add_argument(
        "-d",
        "--dataset",
        dest="dataset",
        type=str,
        required=True,
        help="Path of the 3-d dataset inside the file, e.g. /video.",
    )
    p.add_argument(
        "-o",
        "--output",
        dest="output",
        type=str,
        required=True,
        help="TensorFile to write.",
    )
    p.add_argument(
        "--matlab",
        dest="matlab",
        action="store_true",
        help="Dataset was written by MATLAB (reverse the axis order).",
    )
    p.add_argument(
        "--layout",
        dest="layout",
        choices=["ijk", "kij"],
        default="ijk",
        help="Axis order of the dataset after --matlab: ijk = (m1, m2, m3), "
        "kij = slice-major (m3, m1, m2).",
    )
    p.add_argument(
        "--scale",
        dest="scale",
        type=float,
        default=1.0,
        help="Multiply values by this factor (e.g. 255 for [0, 1] images).",
    )
    cli.add_verbose_arg(p)
    return p.parse_args(argv)


def check_args(args: argparse.Namespace) -> argparse.Namespace:
    if not np.isfinite(args.scale) or args.scale == 0:
        raise ValueError(f"--scale must be finite and nonzero, got {args.scale}")
    return args


def load_dataset(url: str, dataset: str, matlab: bool, layout: str) -> Tensor3:
    with fsspec.open(url, "rb") as f, h5py.File(f, "r") as h5:
        if dataset not in h5:
            raise ValueError(f"Dataset {dataset!r} not found in {url}")
        arr = np.asarray(h5[dataset][()], dtype=np.float64)
    if arr.ndim != 3:
        raise ValueError(f"Dataset {dataset!r} has shape {arr.shape}, need 3 dims")
    if matlab:
        arr = arr.transpose(2, 1, 0)
    if layout == "kij":
        return Tensor3(arr)
    return Tensor3.from_array(arr)


def run_main(args: argparse.Namespace) -> int:
    x = load_dataset(args.input, args.dataset, args.matlab, args.layout)
    if args.scale != 1.0:
        x = x * args.scale
    write_tensor(args.output, x)
    logger.info("Converted %s:%s to %s at %s", args.input, args.dataset, x, args.output)
    return cli.EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = get_cmd_args(argv)
    cli.setup_logging(args.verbose)
    return cli.run_cli(lambda: run_main(check_args(args)))


if __name__ == "__main__":
    sys.exit(main())
