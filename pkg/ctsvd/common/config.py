import os

THREADS_ENV = "TSVD_THREADS"


def threads() -> int:
    """Number of worker threads for tube transforms and per-slice SVDs.

    Read from TSVD_THREADS on every call so tests and scripts can change it
    at runtime. Defaults to 1.
    """
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV}={raw!r} is not an integer")
    if n < 1:
        raise ValueError(f"{THREADS_ENV} must be >= 1, got {n}")
    return n
