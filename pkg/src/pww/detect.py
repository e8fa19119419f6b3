"""Pattern recognizers applied independently to each window.

A detector is any callable ``detect(window) -> list[EpisodeMatch]`` that looks
only at ``window.records`` (and optionally ``window.gaps``). Matches come back
with ``detection_time`` unset; the engine stamps it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from . import kernels
from .stream import Window
from .trace import Record

REMOTE_SHELL = "remote-shell"


@dataclass(frozen=True)
class EpisodeMatch:
    episode: str
    matched_times: tuple[int, ...]
    detection_time: int | None = None
    crosses_gap: bool = False
    level: int | None = None

    @property
    def pattern_start(self) -> int:
        return self.matched_times[0]

    @property
    def pattern_end(self) -> int:
        return self.matched_times[-1]

    @property
    def duration(self) -> int:
        return self.pattern_end - self.pattern_start

    @property
    def delay(self) -> int | None:
        if self.detection_time is None:
            return None
        return self.detection_time - self.pattern_end

    @property
    def key(self) -> tuple[str, tuple[int, ...]]:
        return self.episode, tuple(sorted(self.matched_times))


Detector = Callable[[Window], "list[EpisodeMatch]"]


def remote_shell_positions(records: Sequence[Record]) -> list[tuple[int, ...]]:
    """Record positions of each remote-shell occurrence in ``records``.

    Episode: ``accept fd=x => y``, then ``dup fd=y => 0|1|2`` in any order,
    then ``execve``. Records need not be adjacent.
    """
    return kernels.scan_remote_shell(tuple(records))


def _matches_from(records: Sequence[Record]) -> list[EpisodeMatch]:
    occs = kernels.scan_remote_shell(tuple(records))
    if not occs:
        return []
    return [EpisodeMatch(REMOTE_SHELL, tuple(records[p].time for p in occ)) for occ in occs]


def match_remote_shell(window: Window) -> list[EpisodeMatch]:
    return _matches_from(window.records)


def oracle_detect(records: Sequence[Record]) -> list[EpisodeMatch]:
    """Run the same matcher over the whole stream as one window."""
    return _matches_from(records)


DETECTORS: dict[str, Detector] = {REMOTE_SHELL: match_remote_shell}


def get_detector(name: str) -> Detector:
    try:
        return DETECTORS[name]
    except KeyError:
        raise ValueError(f"unknown detector {name!r}; choose from {sorted(DETECTORS)}") from None
