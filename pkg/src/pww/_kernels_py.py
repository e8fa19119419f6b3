"""Pure-Python kernels. Reference semantics for ``_kernels.pyx``."""

import math

from .errors import DetectorError
from .stream import Batch, Window

_DUP_SLOT = {"0": 0, "1": 1, "2": 2}


def combine_records(a, b, l_max):
    """Concatenate two record tuples, dropping the middle past ``2*l_max``.

    Returns ``(records, removed)`` where ``removed`` is ``(first, last)`` time of
    the dropped records, or None when nothing was dropped.
    """
    ab = a + b
    n = len(ab)
    if l_max == math.inf or n <= 2 * l_max:
        return ab, None
    keep = int(l_max)
    return ab[:keep] + ab[n - keep:], (ab[keep].time, ab[n - keep - 1].time)


def merge_gaps(gaps):
    out = []
    for lo, hi in sorted(gaps):
        if out and lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return tuple(out)


def combine_batches(b1, b2, l_max):
    """Unchecked sibling combine; see ``engine.combine``."""
    records, removed = combine_records(b1.records, b2.records, l_max)
    gaps = b1.gaps + b2.gaps
    if removed is not None:
        gaps = merge_gaps(gaps + (removed,))
    return Batch(b1.level + 1, b1.ordinal // 2, b1.start, b1.duration * 2, records, gaps)


def scan_remote_shell(records):
    """Positions of remote-shell episodes in ``records``.

    Yields one ``(accept, dup, dup, dup, execve)`` position tuple per accept
    whose dup triple completes and is followed by an execve. Dups on fd ``y``
    are credited to the latest preceding ``accept => y``; for each accept the
    earliest dup of each target and the earliest execve after the triple are
    taken.
    """
    active = {}
    waiting = []
    out = []
    for pos, rec in enumerate(records):
        ev = rec.event
        name = getattr(ev, "name", None)
        if name == "accept":
            y = ev.retval
            if y is not None:
                active[y] = [pos, -1, -1, -1]
        elif name == "dup":
            if not active:
                continue
            slot = _DUP_SLOT.get(ev.retval)
            if slot is None:
                continue
            fd = ev.arg("fd")
            st = active.get(fd)
            if st is None or st[slot + 1] >= 0:
                continue
            st[slot + 1] = pos
            if st[1] >= 0 and st[2] >= 0 and st[3] >= 0:
                waiting.append((st[0],) + tuple(sorted(st[1:])))
                del active[fd]
        elif name == "execve":
            if waiting:
                out.extend(w + (pos,) for w in waiting)
                waiting = []
    out.sort()
    return out


class LevelStage:
    """Sliding windows over one level's batches; pairs siblings for the next level.

    ``push`` takes the level's batches in ordinal order. Each batch after the
    first closes a window, which is handed to ``detector`` and charged
    ``cost(len(records))``. Returns the combined batch when ``batch`` completes
    a sibling pair and ``widen`` is set, else None.
    """

    def __init__(self, level, l_max, detector, cost, widen, stamp):
        self.level = level
        self.l_max = l_max
        self.detector = detector
        self.cost = cost
        self.widen = widen
        self.stamp = stamp
        self.prev = None
        self.windows = 0
        self.work = 0
        self.hits = []

    def push(self, batch):
        prev = self.prev
        self.prev = batch
        if prev is None:
            return None
        window = Window(
            self.level, prev.ordinal, prev.start, prev.duration * 2,
            prev.records + batch.records, prev.gaps + batch.gaps,
        )
        try:
            found = self.detector(window)
        except Exception as e:
            raise DetectorError(
                f"detector failed on level {window.level} window {window.ordinal} "
                f"[{window.start}, {window.start + window.duration})"
            ) from e
        self.windows += 1
        self.work += self.cost(len(window.records))
        if found:
            done = window.start + window.duration
            for i, m in enumerate(found):
                self.hits.append((done, self.level, window.ordinal, i, self.stamp(m, window)))
        if self.widen and not prev.ordinal & 1:
            return combine_batches(prev, batch, self.l_max)
        return None


def run_cascade(batches, stages):
    """Feed level-0 batches through all stages in event-time order.

    Each level-0 batch advances the clock to its end; any batch it causes to
    be combined upward ends at the same instant, so windows are processed in
    non-decreasing completion time and never before it.
    """
    depth = len(stages)
    for b in batches:
        clock = b.start + b.duration
        i = 0
        while b is not None and i < depth:
            if b.start + b.duration > clock:
                raise RuntimeError("window scheduled before its completion time")
            b = stages[i].push(b)
            i += 1
