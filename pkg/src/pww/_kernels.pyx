# cython: language_level=3, boundscheck=False
"""Compiled kernels. Must stay behaviour-identical to ``_kernels_py``."""

import math

from pww.errors import DetectorError
from pww.stream import Batch, Window

cdef double INF = math.inf
_tuple_new = tuple.__new__

# Batch / Window field positions (both are NamedTuples with the same layout)
DEF LEVEL = 0
DEF ORDINAL = 1
DEF START = 2
DEF DURATION = 3
DEF RECORDS = 4
DEF GAPS = 5


def combine_records(tuple a, tuple b, l_max):
    cdef tuple ab = a + b
    cdef Py_ssize_t n = len(ab)
    cdef Py_ssize_t keep
    if l_max == INF or n <= 2 * l_max:
        return ab, None
    keep = <Py_ssize_t>l_max
    return ab[:keep] + ab[n - keep:], ((<object>ab[keep]).time, (<object>ab[n - keep - 1]).time)


def merge_gaps(gaps):
    cdef list out = []
    cdef object lo, hi
    for lo, hi in sorted(gaps):
        if out and lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return tuple(out)


cpdef object combine_batches(object batch1, object batch2, object l_max):
    cdef tuple b1 = <tuple>batch1, b2 = <tuple>batch2
    cdef tuple records, gaps
    cdef object removed
    records, removed = combine_records(b1[RECORDS], b2[RECORDS], l_max)
    gaps = b1[GAPS] + b2[GAPS]
    if removed is not None:
        gaps = merge_gaps(gaps + (removed,))
    return _tuple_new(Batch, (b1[LEVEL] + 1, b1[ORDINAL] // 2, b1[START], b1[DURATION] * 2, records, gaps))


cdef inline int _dup_slot(object retval):
    if retval is None:
        return -1
    if retval == "0":
        return 0
    if retval == "1":
        return 1
    if retval == "2":
        return 2
    return -1


def scan_remote_shell(tuple records):
    cdef dict active = {}
    cdef list waiting = []
    cdef list out = []
    cdef list st
    cdef Py_ssize_t pos, n = len(records)
    cdef int slot
    cdef object ev, name, y, fd, w
    for pos in range(n):
        ev = (<object>records[pos]).event
        try:
            name = ev.name
        except AttributeError:
            continue
        if name == "accept":
            y = ev.retval
            if y is not None:
                active[y] = [pos, -1, -1, -1]
        elif name == "dup":
            if not active:
                continue
            slot = _dup_slot(ev.retval)
            if slot < 0:
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
                for w in waiting:
                    out.append(w + (pos,))
                waiting = []
    out.sort()
    return out


cdef class LevelStage:
    cdef public int level
    cdef public object l_max
    cdef public object detector
    cdef public object cost
    cdef public bint widen
    cdef public object stamp
    cdef public object prev
    cdef public long windows
    cdef public object work
    cdef public list hits

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

    def push(self, object new):
        cdef tuple batch = <tuple>new
        cdef object last = self.prev
        cdef tuple prev, records
        cdef object window, found, m, ordinal, start, done
        cdef Py_ssize_t i
        self.prev = new
        if last is None:
            return None
        prev = <tuple>last
        records = prev[RECORDS] + batch[RECORDS]
        ordinal = prev[ORDINAL]
        start = prev[START]
        done = batch[START] + batch[DURATION]
        window = _tuple_new(Window, (
            self.level, ordinal, start, prev[DURATION] * 2, records, prev[GAPS] + batch[GAPS],
        ))
        try:
            found = self.detector(window)
        except Exception as e:
            raise DetectorError(
                f"detector failed on level {self.level} window {ordinal} [{start}, {done})"
            ) from e
        self.windows += 1
        self.work += self.cost(len(records))
        if found:
            for i, m in enumerate(found):
                self.hits.append((done, self.level, ordinal, i, self.stamp(m, window)))
        if self.widen and not (ordinal & 1):
            return combine_batches(last, new, self.l_max)
        return None


def run_cascade(batches, list stages):
    cdef Py_ssize_t i, depth = len(stages)
    cdef object b, clock
    for b in batches:
        clock = (<tuple>b)[START] + (<tuple>b)[DURATION]
        i = 0
        while b is not None and i < depth:
            if (<tuple>b)[START] + (<tuple>b)[DURATION] > clock:
                raise RuntimeError("window scheduled before its completion time")
            b = (<LevelStage>stages[i]).push(b)
            i += 1
