"""Script to build the synthetic TensorFile fixtures used by the script tests.

Writes a 16x16x8 tubal-rank-1 tensor at image scale, a 60% observation mask
for it, and a smooth-tube tensor with non-periodic tubes. Everything is
seeded, so rebuilding gives byte-identical files. The tests call `build`
on a temporary directory; the files in this directory are for poking at
the scripts by hand.

Run once to (re)build fixtures:
    conda run -n ctsvd python ctsvd/tests/fixtures/build_synthetic_fixtures.py
"""

import pathlib
import sys

REPO_ROOT = pathlib.Path(__file__).resolve().parents[3]
sys.path.insert(0, str(REPO_ROOT))

from ctsvd.common.tensor_file import write_mask, write_tensor  # noqa: E402
from ctsvd.completion.masks import make_mask  # noqa: E402
from ctsvd.completion.synthetic import smooth_tubes, tubal_rank_one  # noqa: E402

FIXTURES = pathlib.Path(__file__).parent
RANK_ONE_DIMS = (16, 16, 8)
SMOOTH_DIMS = (12, 12, 16)
SAMPLING_RATE = 0.6
SEED = 0

RANK_ONE = "rank1_16x16x8.t3f"
RANK_ONE_MASK = "rank1_16x16x8_sr60.mask.t3f"
SMOOTH = "smooth_12x12x16.t3f"


def build(out_dir: pathlib.Path) -> dict:
    """Write all fixtures to out_dir and return their paths by name."""
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "rank_one": out_dir / RANK_ONE,
        "rank_one_mask": out_dir / RANK_ONE_MASK,
        "smooth": out_dir / SMOOTH,
    }
    write_tensor(str(paths["rank_one"]), tubal_rank_one(*RANK_ONE_DIMS, seed=SEED))
    write_mask(str(paths["rank_one_mask"]), make_mask(RANK_ONE_DIMS, SAMPLING_RATE, SEED))
    write_tensor(str(paths["smooth"]), smooth_tubes(*SMOOTH_DIMS, seed=SEED))
    return paths


def main():
    for name, path in build(FIXTURES).items():
        print(f"{name}: {path}")


if __name__ == "__main__":
    main()
