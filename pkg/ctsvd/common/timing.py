from contextlib import contextmanager
from dataclasses import dataclass
import time


@dataclass
class StageTimes:
    """Wall-clock seconds spent per stage, accumulated across calls."""

    transform: float = 0.0
    svd: float = 0.0
    total: float = 0.0

    @contextmanager
    def stage(self, name: str):
        if name not in ("transform", "svd", "total"):
            raise ValueError(f"Unknown stage {name!r}")
        start = time.perf_counter()
        try:
            yield self
        finally:
            setattr(self, name, getattr(self, name) + time.perf_counter() - start)

    def add(self, other: "StageTimes"):
        self.transform += other.transform
        self.svd += other.svd
        self.total += other.total

    def to_dict(self) -> dict:
        return {"transform": self.transform, "svd": self.svd, "total": self.total}
