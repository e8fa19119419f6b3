"""Synthetic syscall traces with injected remote-shell episodes."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .trace import Record, SyscallEvent

DEFAULT_ALPHABET = ("read", "write", "open", "close", "stat", "mmap", "brk", "futex")


class InjectionError(ValueError):
    pass


@dataclass(frozen=True)
class InjectionSpec:
    start_time: int
    gap: int
    fd_pair: tuple[str, str] = ("5", "6")
    exe: str = "sh"
    max_span_records: int | None = 100
    seed: int = 0

    @property
    def duration(self) -> int:
        return 4 * self.gap

    @property
    def end_time(self) -> int:
        return self.start_time + self.duration


def _background_event(rng: random.Random, name: str) -> SyscallEvent:
    fd = str(rng.randrange(3, 10))
    if name in ("read", "write"):
        return SyscallEvent(name, (("fd", fd), ("count", str(rng.randrange(1, 4097)))), str(rng.randrange(0, 4097)))
    if name == "open":
        return SyscallEvent(name, (("path", f"/tmp/f{rng.randrange(100)}"),), fd)
    if name == "close":
        return SyscallEvent(name, (("fd", fd),), "0")
    if name == "stat":
        return SyscallEvent(name, (("path", f"/etc/c{rng.randrange(20)}"),), "0")
    if name == "mmap":
        return SyscallEvent(name, (("len", str(4096 * rng.randrange(1, 64))),), hex(rng.randrange(1 << 32)))
    if name == "futex":
        return SyscallEvent(name, (("op", rng.choice(("WAIT", "WAKE"))),), "0")
    return SyscallEvent(name)


def gen_background(
    n: int,
    rate: float = 1.0,
    seed: int = 0,
    alphabet: Sequence[str] = DEFAULT_ALPHABET,
) -> list[Record]:
    """``n`` benign records, ``rate`` per time unit (record k at ``floor(k/rate)``)."""
    if not alphabet:
        raise ValueError("alphabet must not be empty")
    if "accept" in alphabet:
        raise ValueError("background alphabet must not contain 'accept'")
    if rate <= 0:
        raise ValueError(f"rate must be positive, got {rate}")
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    rng = random.Random(seed)
    names = list(alphabet)
    return [Record(int(k // rate), _background_event(rng, rng.choice(names))) for k in range(n)]


def episode_events(spec: InjectionSpec, rng: random.Random) -> list[SyscallEvent]:
    x, y = spec.fd_pair
    dups = [SyscallEvent("dup", (("fd", y),), str(k)) for k in range(3)]
    rng.shuffle(dups)
    return [SyscallEvent("accept", (("fd", x),), y), *dups, SyscallEvent("execve", (("exe", spec.exe),))]


def inject_episode(records: Sequence[Record], spec: InjectionSpec) -> list[Record]:
    """Insert one episode at ``start, start+gap, ..., start+4*gap``.

    Background strictly inside the episode interval is thinned (seeded) so the
    episode spans at most ``max_span_records`` records; None disables thinning. Background at the start
    time sorts before the accept and background at the end time after the
    execve, so neither counts toward the span.
    """
    if spec.start_time < 0:
        raise InjectionError(f"episode starts before stream origin: {spec.start_time}")
    if spec.gap < 0:
        raise InjectionError(f"gap must be non-negative, got {spec.gap}")
    if spec.max_span_records is not None and spec.max_span_records < 5:
        raise InjectionError(f"an episode spans 5 records; max_span_records={spec.max_span_records}")
    rng = random.Random(spec.seed)
    events = episode_events(spec, rng)
    lo, hi = spec.start_time, spec.end_time

    before = [r for r in records if r.time <= lo]
    inside = [r for r in records if lo < r.time < hi]
    after = [r for r in records if r.time >= hi and r.time > lo]

    if spec.max_span_records is not None and len(inside) > spec.max_span_records - 5:
        room = spec.max_span_records - 5
        keep = sorted(rng.sample(range(len(inside)), room))
        inside = [inside[i] for i in keep]

    ep = [Record(lo + k * spec.gap, ev) for k, ev in enumerate(events)]
    # stable merge: episode record goes first among equal times inside the interval
    middle = sorted(ep[1:-1] + inside, key=lambda r: r.time)
    return before + [ep[0]] + middle + [ep[-1]] + after
