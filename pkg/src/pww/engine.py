"""Progressive window widening engine.

Every level runs half-overlap sliding windows over its own batch stream and
feeds pairs of its batches, combined, to the level above. Combined batches
keep at most ``l_max`` records at each end; the dropped middle is recorded as
a gap.
"""

from __future__ import annotations

import math
import queue
import threading
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Sequence

from . import kernels
from .detect import Detector, EpisodeMatch
from .errors import ConfigError
from .stream import Batch, StreamConfig, Window, iter_batches
from .trace import Record

SEQUENTIAL = "sequential"
CONCURRENT = "concurrent"


@dataclass(frozen=True)
class CostModel:
    """Work charged for running a detector on a window of ``l`` records."""

    name: str
    cost_of: Callable[[int], float]

    def __call__(self, length: int) -> float:
        return self.cost_of(length)


LINEAR = CostModel("linear", lambda l: l)
QUADRATIC = CostModel("quadratic", lambda l: l * l)
NLOGN = CostModel("nlogn", lambda l: l * math.log2(l) if l > 1 else 0)
COST_MODELS = {m.name: m for m in (LINEAR, QUADRATIC, NLOGN)}


def get_cost_model(name: str) -> CostModel:
    try:
        return COST_MODELS[name]
    except KeyError:
        raise ValueError(f"unknown cost model {name!r}; choose from {sorted(COST_MODELS)}") from None


@dataclass(frozen=True)
class LevelWork:
    level: int
    windows: int
    work: float


@dataclass(frozen=True)
class WorkLedger:
    per_level: tuple[LevelWork, ...]
    stream_duration: int
    rho_bound: float

    @property
    def total_work(self) -> float:
        return sum(lw.work for lw in self.per_level)

    @property
    def windows(self) -> int:
        return sum(lw.windows for lw in self.per_level)

    @property
    def rho_measured(self) -> float:
        if self.stream_duration <= 0:
            return 0.0
        return self.total_work / self.stream_duration


@dataclass(frozen=True)
class EngineResult:
    matches: tuple[EpisodeMatch, ...]
    ledger: WorkLedger
    levels_used: int


def level_count(t_max: int, t0: int) -> int:
    """Levels (level 0 included) needed so the coarsest batch duration is >= t_max.

    Windows at that level are then at least ``2*t_max`` long, which covers any
    pattern of duration up to ``t_max``.
    """
    if t0 < 1:
        raise ConfigError(f"t0 must be >= 1, got {t0}")
    if t_max < t0:
        raise ConfigError(f"t_max ({t_max}) must be >= t0 ({t0})")
    # exact integer ceil(log2(t_max / t0))
    q = -(-t_max // t0)
    return (q - 1).bit_length() + 1


def work_bound(l_max: float, t0: int, cost: CostModel = LINEAR) -> float:
    return 2 * cost(4 * l_max) / t0


def combine(b1: Batch, b2: Batch, l_max: float) -> Batch:
    """Merge sibling batches ``2j`` and ``2j+1`` into level+1 batch ``j``.

    If the concatenation holds more than ``2*l_max`` records, only the first
    and last ``l_max`` are kept and the dropped span becomes a gap.
    """
    if b1.level != b2.level:
        raise ValueError(f"cannot combine batches from levels {b1.level} and {b2.level}")
    if b1.ordinal % 2 or b2.ordinal != b1.ordinal + 1 or b2.start != b1.start + b1.duration:
        raise ValueError(f"batches {b1.ordinal} and {b2.ordinal} are not siblings")
    return kernels.combine_batches(b1, b2, l_max)


def widen_level(batches: Sequence[Batch], l_max: float) -> list[Batch]:
    """Combine consecutive sibling pairs; an unpaired tail gets an empty sibling."""
    out = []
    for i in range(0, len(batches), 2):
        b1 = batches[i]
        if i + 1 < len(batches):
            b2 = batches[i + 1]
        else:
            b2 = Batch(b1.level, b1.ordinal + 1, b1.start + b1.duration, b1.duration)
        out.append(combine(b1, b2, l_max))
    return out


def stamp(match: EpisodeMatch, window: Window) -> EpisodeMatch:
    lo, hi = match.pattern_start, match.pattern_end
    crosses = any(g0 <= hi and g1 >= lo for g0, g1 in window.gaps)
    return replace(match, detection_time=window.complete_at, crosses_gap=crosses, level=window.level)


def horizon(records: Sequence[Record], config: StreamConfig) -> int:
    """Stream end: the coarsest-level batch after the one holding the last record.

    That trailing (empty) batch lets the final data batch of every level
    appear in a window.
    """
    if not records:
        return 0
    d = config.coarsest_duration
    return (records[-1].time // d + 2) * d


_DONE = object()


def _run_concurrent(batches, levels: list) -> None:
    depth = len(levels)
    queues = [queue.Queue() for _ in range(depth)]
    errors: list[BaseException] = []

    def worker(i: int) -> None:
        lvl = levels[i]
        inbox = queues[i]
        outbox = queues[i + 1] if i + 1 < depth else None
        failed = False
        while True:
            b = inbox.get()
            if b is _DONE:
                break
            if failed:
                continue
            try:
                up = lvl.push(b)
            except BaseException as e:  # drain the queue, report after join
                errors.append(e)
                failed = True
                continue
            if up is not None and outbox is not None:
                outbox.put(up)
        if outbox is not None:
            outbox.put(_DONE)

    threads = [threading.Thread(target=worker, args=(i,), daemon=True) for i in range(depth)]
    for t in threads:
        t.start()
    try:
        for b in batches:
            queues[0].put(b)
    finally:
        queues[0].put(_DONE)
        for t in threads:
            t.join()
    if errors:
        raise errors[0]


def dedup(hits: Iterable[tuple]) -> tuple[EpisodeMatch, ...]:
    """Keep the first detection of each match key, ordered by detection time."""
    seen = set()
    out = []
    for *_, m in sorted(hits, key=lambda h: h[:4]):
        if m.key in seen:
            continue
        seen.add(m.key)
        out.append(m)
    return tuple(out)


def run_pww(
    records: Sequence[Record],
    config: StreamConfig,
    detector: Detector,
    cost: CostModel = LINEAR,
    mode: str = SEQUENTIAL,
) -> EngineResult:
    """Run ``detector`` over every sliding window of levels ``0..depth-1``."""
    if mode not in (SEQUENTIAL, CONCURRENT):
        raise ConfigError(f"unknown mode {mode!r}")
    depth = config.depth
    levels = [
        kernels.LevelStage(i, config.l_max, detector, cost.cost_of, i + 1 < depth, stamp)
        for i in range(depth)
    ]
    end = horizon(records, config)
    batches = iter_batches(records, config.t0, end) if end else iter(())
    if mode == SEQUENTIAL:
        kernels.run_cascade(batches, levels)
    else:
        _run_concurrent(batches, levels)

    ledger = WorkLedger(
        tuple(LevelWork(lvl.level, lvl.windows, lvl.work) for lvl in levels),
        end,
        work_bound(config.l_max, config.t0, cost),
    )
    hits = [h for lvl in levels for h in lvl.hits]
    return EngineResult(dedup(hits), ledger, depth)
