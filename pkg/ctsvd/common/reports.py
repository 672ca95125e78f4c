from dataclasses import dataclass, field
import fsspec
import json
import logging
import pandas as pd
from typing import List, Optional

from ctsvd.common.metrics import MetricReport
from ctsvd.common.timing import StageTimes

logger = logging.getLogger(__name__)


@dataclass
class RunReport:
    """Everything needed to re-run and judge one completion run."""

    method: str
    config: dict
    sampling_rate: float
    seed: Optional[int]
    input: str
    mask: Optional[str]
    iterations: int
    converged: bool
    hit_max_iters: bool
    history: List[float] = field(default_factory=list)
    primal_residual: List[float] = field(default_factory=list)
    objective: List[float] = field(default_factory=list)
    times: StageTimes = field(default_factory=StageTimes)
    metrics: Optional[MetricReport] = None
    tube_trace: Optional[dict] = None

    def to_dict(self, include_times: bool = True) -> dict:
        out = {
            "method": self.method,
            "config": self.config,
            "sampling_rate": self.sampling_rate,
            "seed": self.seed,
            "input": self.input,
            "mask": self.mask,
            "iterations": self.iterations,
            "converged": self.converged,
            "hit_max_iters": self.hit_max_iters,
            "trace": {
                "relative_change": self.history,
                "primal_residual": self.primal_residual,
                "objective": self.objective,
            },
            "metrics": None,
            "tube_trace": self.tube_trace,
        }
        if self.metrics is not None:
            out["metrics"] = self.metrics.to_dict()
            if not include_times:
                out["metrics"].pop("times")
        if include_times:
            out["times"] = self.times.to_dict()
        return out


def dumps(payload: dict) -> str:
    """Deterministic JSON: sorted keys, fixed indent."""
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False)


def write_json(url: str, payload: dict):
    with fsspec.open(url, "w") as f:
        f.write(dumps(payload) + "\n")
    logger.info("Wrote report to %s", url)


def write_csv(url: str, df: pd.DataFrame):
    with fsspec.open(url, "w") as f:
        df.to_csv(f, index=False)
    logger.info("Wrote %d rows to %s", len(df), url)
