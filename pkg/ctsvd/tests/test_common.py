import argparse
import json
import math
import pandas as pd
import pytest
from unittest.mock import patch

from ctsvd.common import cli, reports
from ctsvd.common.errors import ConjugateSymmetryError, NumericalError, TensorFileError
from ctsvd.common.metrics import evaluate
from ctsvd.common.timing import StageTimes
from ctsvd.core.transforms import TransformKind


# ---------------------------------------------------------------------------
# stage timing
# ---------------------------------------------------------------------------


class TestStageTimes:
    def test_stage_accumulates(self):
        times = StageTimes()
        with patch("ctsvd.common.timing.time.perf_counter", side_effect=[1.0, 3.5, 4.0, 5.0]):
            with times.stage("svd"):
                pass
            with times.stage("svd"):
                pass
        assert times.svd == 3.5
        assert times.transform == 0.0

    def test_unknown_stage(self):
        with pytest.raises(ValueError):
            with StageTimes().stage("fft"):
                pass

    def test_add_and_dict(self):
        a = StageTimes(1.0, 2.0, 4.0)
        a.add(StageTimes(0.5, 0.5, 1.0))
        assert a.to_dict() == {"transform": 1.5, "svd": 2.5, "total": 5.0}


# ---------------------------------------------------------------------------
# cli helpers
# ---------------------------------------------------------------------------


class TestCli:
    @pytest.mark.parametrize(
        "exc, code",
        [
            (NumericalError("nan"), cli.EXIT_NUMERICAL),
            (ConjugateSymmetryError(1.0, 1e-10), cli.EXIT_NUMERICAL),
            (TensorFileError("bad magic"), cli.EXIT_IO),
            (FileNotFoundError("missing"), cli.EXIT_IO),
            (ValueError("bad"), cli.EXIT_USAGE),
            (IndexError("out of range"), cli.EXIT_USAGE),
        ],
    )
    def test_run_cli_exit_codes(self, exc, code):
        def fail():
            raise exc

        assert cli.run_cli(fail) == code

    def test_run_cli_passes_through_success(self):
        assert cli.run_cli(lambda: cli.EXIT_OK) == 0

    def test_parser_error_exits_with_usage_code(self):
        p = cli.ArgumentParser(prog="test")
        p.add_argument("--n", type=int, required=True)
        with pytest.raises(SystemExit) as exc:
            p.parse_args([])
        assert exc.value.code == cli.EXIT_USAGE

    def test_parse_dims(self):
        assert cli.parse_dims("100x100x400") == (100, 100, 400)
        assert cli.parse_dims("2X3X4") == (2, 3, 4)

    @pytest.mark.parametrize("text", ["2x3", "2x3xz", "0x3x4"])
    def test_parse_dims_invalid(self, text):
        with pytest.raises(argparse.ArgumentTypeError):
            cli.parse_dims(text)

    def test_methods(self):
        assert cli.METHODS["dct"] is TransformKind.DCT_ORTHO
        assert cli.METHODS["dft"] is TransformKind.DFT

    def test_check_memory(self):
        with patch.object(cli.psutil, "virtual_memory") as vm:
            vm.return_value.available = 1000
            cli.check_memory(400, "test")
            with pytest.raises(ValueError):
                cli.check_memory(600, "test")


# ---------------------------------------------------------------------------
# run reports
# ---------------------------------------------------------------------------


def _report(example_tensor, **kwargs):
    return reports.RunReport(
        method="dct",
        config={"beta": 0.01},
        sampling_rate=0.5,
        seed=0,
        input="x.t3f",
        mask=None,
        iterations=2,
        converged=True,
        hit_max_iters=False,
        history=[0.5, 1e-9],
        metrics=evaluate(example_tensor, example_tensor),
        **kwargs,
    )


class TestReports:
    def test_trace_layout(self, example_tensor):
        d = _report(example_tensor).to_dict()
        assert d["trace"]["relative_change"] == [0.5, 1e-9]
        assert d["metrics"]["psnr_mean"] == "inf"
        assert set(d["times"]) == {"transform", "svd", "total"}

    def test_without_times(self, example_tensor):
        d = _report(example_tensor).to_dict(include_times=False)
        assert "times" not in d
        assert "times" not in d["metrics"]

    def test_dumps_is_deterministic(self, example_tensor):
        a = reports.dumps(_report(example_tensor).to_dict(include_times=False))
        b = reports.dumps(_report(example_tensor).to_dict(include_times=False))
        assert a == b
        assert list(json.loads(a)) == sorted(json.loads(a))

    def test_dumps_rejects_nan(self):
        with pytest.raises(ValueError):
            reports.dumps({"x": math.nan})

    def test_write_json_and_csv(self, tmp_path):
        reports.write_json(str(tmp_path / "r.json"), {"b": 1, "a": 2})
        assert json.loads((tmp_path / "r.json").read_text()) == {"a": 2, "b": 1}
        df = pd.DataFrame({"size": ["1x1x1"], "svd": [0.1]})
        reports.write_csv(str(tmp_path / "r.csv"), df)
        pd.testing.assert_frame_equal(pd.read_csv(tmp_path / "r.csv"), df)
