"""Batched stream model: time-aligned batches per level and half-overlap windows.

Level ``i`` batches have duration ``t0 * 2**i`` and start at multiples of it,
measured from stream origin 0. A window at level ``i`` is two adjacent level-i
batches; consecutive windows overlap by one batch.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import ConfigError
from .trace import Record

Gap = tuple[int, int]


class Batch(NamedTuple):
    level: int
    ordinal: int
    start: int
    duration: int
    records: tuple[Record, ...] = ()
    gaps: tuple[Gap, ...] = ()

    @property
    def end(self) -> int:
        return self.start + self.duration


class Window(NamedTuple):
    level: int
    ordinal: int
    start: int
    duration: int
    records: tuple[Record, ...] = ()
    gaps: tuple[Gap, ...] = ()

    @property
    def complete_at(self) -> int:
        return self.start + self.duration


@dataclass(frozen=True)
class StreamConfig:
    """Engine parameters.

    ``l_max`` may be ``math.inf`` to disable discarding entirely.
    """

    t0: int
    l_max: float
    t_max: int
    depth: int

    def __post_init__(self) -> None:
        if self.t0 < 1:
            raise ConfigError(f"t0 must be >= 1, got {self.t0}")
        if self.l_max < 1:
            raise ConfigError(f"l_max must be >= 1, got {self.l_max}")
        if self.t_max < self.t0:
            raise ConfigError(f"t_max ({self.t_max}) must be >= t0 ({self.t0})")
        if self.depth < 1:
            raise ConfigError(f"depth must be >= 1, got {self.depth}")

    @classmethod
    def from_t_max(cls, t0: int, l_max: float, t_max: int) -> "StreamConfig":
        from .engine import level_count

        return cls(t0, l_max, t_max, level_count(t_max, t0))

    @classmethod
    def from_depth(cls, t0: int, l_max: float, depth: int) -> "StreamConfig":
        # largest pattern duration the coarsest level is guaranteed to cover
        return cls(t0, l_max, t0 << (depth - 1), depth)

    def batch_duration(self, level: int) -> int:
        return self.t0 << level

    @property
    def coarsest_duration(self) -> int:
        return self.batch_duration(self.depth - 1)


def iter_batches(records: Iterable[Record], t0: int, horizon: int | None = None) -> Iterator[Batch]:
    """Yield level-0 batches ``[j*t0, (j+1)*t0)`` in order, including empty ones.

    Batches are produced until ``horizon`` (rounded up to a multiple of t0) or,
    when it is None, until the batch holding the last record.
    """
    if t0 < 1:
        raise ConfigError(f"t0 must be >= 1, got {t0}")
    j = 0
    bucket: list[Record] = []
    prev = -1
    for r in records:
        if r.time < prev:
            raise ValueError(f"records out of time order at time {r.time}")
        prev = r.time
        while r.time >= (j + 1) * t0:
            yield Batch(0, j, j * t0, t0, tuple(bucket))
            bucket = []
            j += 1
        bucket.append(r)
    if horizon is None:
        if bucket:
            yield Batch(0, j, j * t0, t0, tuple(bucket))
        return
    if prev >= horizon:
        raise ValueError(f"horizon {horizon} does not cover record at time {prev}")
    n = -(-horizon // t0)
    while j < n:
        yield Batch(0, j, j * t0, t0, tuple(bucket))
        bucket = []
        j += 1


def batchify(records: Sequence[Record], t0: int, horizon: int | None = None) -> list[Batch]:
    return list(iter_batches(records, t0, horizon))


def make_window(first: Batch, second: Batch) -> Window:
    if first.level != second.level:
        raise ValueError(f"cannot window batches from levels {first.level} and {second.level}")
    if second.ordinal != first.ordinal + 1:
        raise ValueError(f"batches {first.ordinal} and {second.ordinal} are not adjacent")
    return Window(
        first.level,
        first.ordinal,
        first.start,
        first.duration * 2,
        first.records + second.records,
        first.gaps + second.gaps,
    )


def window_slide(batches: Sequence[Batch]) -> list[Window]:
    """Half-overlap sliding windows over consecutive same-level batches."""
    if batches:
        level = batches[0].level
        for b in batches:
            if b.level != level:
                raise ValueError(f"mixed levels in window_slide: {level} and {b.level}")
    return [make_window(a, b) for a, b in zip(batches, batches[1:])]


def flatten(batches: Iterable[Batch]) -> list[Record]:
    return [r for b in batches for r in b.records]
