"""Detection-delay and amount-of-work experiments, plus the fixed-window baseline."""

from __future__ import annotations

import bisect
import csv
import io
import logging
import math
import random
import statistics
from dataclasses import dataclass
from typing import Iterable, Sequence

from .detect import Detector, EpisodeMatch, match_remote_shell
from .engine import LINEAR, CostModel, dedup, run_pww, stamp, work_bound
from .stream import StreamConfig, Window
from .synth import InjectionSpec, gen_background, inject_episode
from .trace import Record

log = logging.getLogger(__name__)

FIXED_WINDOW = 200
FIXED_STEP = 100


@dataclass(frozen=True)
class BaselineResult:
    matches: tuple[EpisodeMatch, ...]
    windows: int
    work: float
    duration: int

    @property
    def rho(self) -> float:
        return self.work / self.duration if self.duration > 0 else 0.0


@dataclass(frozen=True)
class DelayPoint:
    episode_duration: int
    mean_delay: float
    n_samples: int


@dataclass(frozen=True)
class WorkPoint:
    t0: int
    rho_pww: float
    rho_fixed: float
    rho_bound: float


def run_baseline_fixed(
    records: Sequence[Record],
    window_size: int = FIXED_WINDOW,
    step: int = FIXED_STEP,
    detector: Detector = match_remote_shell,
    cost: CostModel = LINEAR,
) -> BaselineResult:
    """Single fixed-duration sliding window over the raw stream.

    Windows ``[k*step, k*step + window_size)`` are emitted for every ``k`` whose
    window starts at or before the last record. Charging and dedup follow
    ``run_pww``.
    """
    if step < 1 or window_size < step:
        raise ValueError(f"need window_size >= step >= 1, got window_size={window_size}, step={step}")
    if not records:
        return BaselineResult((), 0, 0.0, 0)
    times = [r.time for r in records]
    last = times[-1]
    hits = []
    work = 0.0
    k = 0
    while k * step <= last:
        lo = k * step
        i = bisect.bisect_left(times, lo)
        j = bisect.bisect_left(times, lo + window_size)
        w = Window(0, k, lo, window_size, tuple(records[i:j]))
        work += cost(j - i)
        for n, m in enumerate(detector(w)):
            hits.append((w.complete_at, 0, k, n, stamp(m, w)))
        k += 1
    duration = (k - 1) * step + window_size
    return BaselineResult(dedup(hits), k, work, duration)


def _checked_delay(matches: Sequence[EpisodeMatch], spec: InjectionSpec) -> int:
    if not matches:
        raise RuntimeError(f"injected episode at {spec.start_time} (gap {spec.gap}) was not detected")
    return matches[0].delay


def run_delay_experiment(
    durations: Iterable[int],
    trials: int,
    config: StreamConfig,
    seed: int = 0,
    n_background: int = 10_000,
    rate: float = 1.0,
) -> list[DelayPoint]:
    """Mean PWW detection delay per episode duration.

    Each trial injects one episode (inter-call gap ``duration / 4``) at a
    seeded random start into a shared background trace.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    background = gen_background(n_background, rate, seed)
    end = background[-1].time + 1 if background else 1
    span = None if config.l_max == math.inf else int(config.l_max)
    points = []
    for duration in sorted(set(durations)):
        if duration % 4:
            raise ValueError(f"episode duration must be a multiple of 4, got {duration}")
        if duration > config.t_max:
            raise ValueError(f"episode duration {duration} exceeds t_max {config.t_max}")
        rng = random.Random(f"{seed}:{duration}")
        delays = []
        for _ in range(trials):
            start = rng.randrange(0, max(1, end - duration))
            spec = InjectionSpec(start, duration // 4, max_span_records=span, seed=rng.getrandbits(32))
            trace = inject_episode(background, spec)
            result = run_pww(trace, config, match_remote_shell)
            delays.append(_checked_delay(result.matches, spec))
        points.append(DelayPoint(duration, sum(delays) / len(delays), len(delays)))
    return points


def max_batch_length(records: Sequence[Record], t0: int) -> int:
    counts: dict[int, int] = {}
    for r in records:
        k = r.time // t0
        counts[k] = counts.get(k, 0) + 1
    return max(counts.values(), default=0)


def run_work_experiment(
    t0_values: Iterable[int],
    l_max: int = 100,
    t_max: int = 512,
    seed: int = 0,
    n_background: int = 10_000,
    rate: float = 1.0,
    cost: CostModel = LINEAR,
    window_size: int = FIXED_WINDOW,
    step: int = FIXED_STEP,
) -> list[WorkPoint]:
    """Work per time unit of PWW vs the fixed window for each initial batch duration."""
    records = gen_background(n_background, rate, seed)
    fixed = run_baseline_fixed(records, window_size, step, match_remote_shell, cost)
    points = []
    for t0 in sorted(set(t0_values)):
        longest = max_batch_length(records, t0)
        if longest > 2 * l_max:
            log.warning("skipping t0=%d: level-0 batch holds %d records > 2*l_max=%d", t0, longest, 2 * l_max)
            continue
        config = StreamConfig.from_t_max(t0, l_max, max(t_max, t0))
        result = run_pww(records, config, match_remote_shell, cost)
        points.append(WorkPoint(t0, result.ledger.rho_measured, fixed.rho, work_bound(l_max, t0, cost)))
    return points


def _fmt(x: float) -> str:
    return f"{x:.6f}".rstrip("0").rstrip(".") if isinstance(x, float) else str(x)


def delay_csv(points: Iterable[DelayPoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["duration", "mean_delay", "n"])
    for p in sorted(points, key=lambda p: p.episode_duration):
        w.writerow([p.episode_duration, _fmt(p.mean_delay), p.n_samples])
    return buf.getvalue()


def work_csv(points: Iterable[WorkPoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t0", "rho_pww", "rho_fixed", "rho_bound"])
    for p in sorted(points, key=lambda p: p.t0):
        w.writerow([p.t0, _fmt(p.rho_pww), _fmt(p.rho_fixed), _fmt(p.rho_bound)])
    return buf.getvalue()


def least_squares(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float, float]:
    """Slope, intercept and Pearson r of ``ys`` against ``xs``."""
    fit = statistics.linear_regression(xs, ys)
    return fit.slope, fit.intercept, statistics.correlation(xs, ys)
