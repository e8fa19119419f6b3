"""Progressive window widening: pattern detection over parallel sliding windows
of doubling duration, with length-bounded batch combining."""

from .detect import EpisodeMatch, match_remote_shell, oracle_detect
from .engine import (
    LINEAR,
    CostModel,
    EngineResult,
    WorkLedger,
    combine,
    level_count,
    run_pww,
    widen_level,
    work_bound,
)
from .errors import ConfigError, DetectorError
from .kernels import BACKEND
from .stream import Batch, StreamConfig, Window, batchify, window_slide
from .trace import Record, SyscallEvent, parse_line, parse_trace, serialize_record

__all__ = [
    "BACKEND",
    "Batch",
    "ConfigError",
    "CostModel",
    "DetectorError",
    "EngineResult",
    "EpisodeMatch",
    "LINEAR",
    "Record",
    "StreamConfig",
    "SyscallEvent",
    "Window",
    "WorkLedger",
    "batchify",
    "combine",
    "level_count",
    "match_remote_shell",
    "oracle_detect",
    "parse_line",
    "parse_trace",
    "run_pww",
    "serialize_record",
    "widen_level",
    "window_slide",
    "work_bound",
]
