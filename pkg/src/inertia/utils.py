import functools
import json
import logging
import time
import traceback
from datetime import datetime
from typing import Any, Callable, Optional, TypeVar

import numpy as np
import pandas as pd

F = TypeVar("F", bound=Callable[..., Any])

logger = logging.getLogger(__name__)


def timed(f: F) -> F:
    """Log the execution time of a decorated function"""

    @functools.wraps(f)
    def wrapped(*args, **kwargs):
        start = time.time()
        result = f(*args, **kwargs)
        stop = time.time()

        obs = {
            "type": "Timed",
            "name": f"{f.__module__}.{f.__qualname__}",
            "start": datetime.fromtimestamp(start).isoformat(),
            "stop": datetime.fromtimestamp(stop).isoformat(),
            "runtime": stop - start,
        }

        logger.info(json.dumps(obs))
        return result

    return wrapped  # type: ignore


class frame_statistics:
    """
    Context manager that logs a ``FrameStatistics`` observation about a
    ``DataFrame`` once the block finishes, or an ERROR observation carrying
    the exception when the block raises.

    Usage

        >>> with frame_statistics(X, name="positions"):
        ...     X = pipeline(X)

    """

    def __init__(
        self,
        frame: pd.DataFrame,
        name: str = "frame",
        logger: logging.Logger = logger,
    ):
        self.frame = frame
        self.name = name
        self.started = datetime.now()
        self.logger = logger

    def __enter__(self):
        return self

    def __exit__(self, type_, value, tb):
        # fmt:off
        obs = self.observe()

        if (type_, value, tb) == (None, None, None):
            self.logger.info(json.dumps(obs))

        else:
            obs.update({
                "status": "ERROR",
                "exception": "".join(traceback.format_exception(type_, value, tb)),
            })

            self.logger.error(json.dumps(obs))
        # fmt:on

    def observe(self) -> dict:
        now = datetime.now()
        return {
            "type": "FrameStatistics",
            "name": self.name,
            "start": self.started.isoformat(),
            "stop": now.isoformat(),
            "runtime": now.timestamp() - self.started.timestamp(),
            "rows": len(self.frame.index),
            "columns": len(self.frame.columns),
            "memory": int(self.frame.memory_usage().sum()),
            "status": "OK",
            "exception": None,
        }


def json_default(x: Any) -> Any:
    """``json.dumps`` fallback for numpy scalars, arrays and dates."""
    if isinstance(x, np.generic):
        return x.item()
    elif isinstance(x, np.ndarray):
        return x.tolist()
    elif hasattr(x, "isoformat"):
        return x.isoformat()
    raise TypeError(f"{type(x).__name__} is not JSON serializable")


def relative_gap(a: float, b: float, floor: Optional[float] = 1.0) -> float:
    """|a - b| scaled by max(|a|, |b|, floor)."""
    scale = max(abs(a), abs(b), floor or 0.0)
    return abs(a - b) / scale if scale > 0 else 0.0
