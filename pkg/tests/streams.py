"""Random traces with injected remote-shell episodes, for property tests."""

import random

from pww.stream import StreamConfig
from pww.synth import InjectionSpec, gen_background, inject_episode


def episode_stream(rng: random.Random, l_max: int = 100, max_records: int = 3000):
    """Return ``(records, config, specs)`` with 1-3 non-overlapping episodes.

    Every episode spans at most ``l_max`` records and lasts at most
    ``config.t_max`` time units.
    """
    t0 = rng.choice([1, 1, 2, 4, 8])
    rate = rng.choice([0.25, 0.5, 1, 1, 2, 4, 8])
    t_max = rng.randint(t0, 1024)
    config = StreamConfig.from_t_max(t0, l_max, t_max)
    n = rng.randint(20, max_records)
    records = gen_background(n, rate, rng.getrandbits(32))
    end = records[-1].time + 1
    n_ep = rng.randint(1, 3)
    seg = end // n_ep
    specs = []
    for k in range(n_ep):
        gap = rng.randint(0, min(t_max, max(seg - 1, 0)) // 4)
        room = seg - 4 * gap
        start = k * seg + rng.randrange(max(room, 1))
        spec = InjectionSpec(
            start, gap, (str(rng.randint(3, 9)), str(10 + k)), "sh",
            rng.randint(5, l_max), rng.getrandbits(32),
        )
        records = inject_episode(records, spec)
        specs.append(spec)
    return records, config, specs


def brute_force_earliest_window(times, t0, depth):
    """Smallest completion time over all half-overlap windows of levels < depth
    that contain every time in ``times``; None if no window does."""
    lo, hi = min(times), max(times)
    best = None
    for level in range(depth):
        d = t0 * 2**level
        k = 0
        while k * d <= lo:
            if k * d <= lo and hi < (k + 2) * d:
                done = (k + 2) * d
                best = done if best is None else min(best, done)
            k += 1
    return best
