"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--n 10000] [--depth 10] [--repeat 5]
"""

import argparse
import timeit

from pww import kernels
from pww.detect import EpisodeMatch, REMOTE_SHELL
from pww.engine import horizon, stamp
from pww.stream import StreamConfig, batchify
from pww.synth import InjectionSpec, gen_background, inject_episode


def make_trace(n: int, seed: int):
    records = gen_background(n, 1, seed)
    for k, start in enumerate(range(100, max(n - 600, 101), 2000)):
        records = inject_episode(records, InjectionSpec(start, 8 * (k % 16 + 1), seed=k))
    return records


def cascade(backend, batches, config):
    def detect(window):
        occ = backend.scan_remote_shell(window.records)
        return [EpisodeMatch(REMOTE_SHELL, tuple(window.records[p].time for p in o)) for o in occ]

    stages = [
        backend.LevelStage(i, config.l_max, detect, lambda l: l, i + 1 < config.depth, stamp)
        for i in range(config.depth)
    ]
    backend.run_cascade(iter(batches), stages)
    return sum(len(s.hits) for s in stages)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10_000, help="background records")
    ap.add_argument("--depth", type=int, default=10, help="engine levels")
    ap.add_argument("--repeat", type=int, default=5, help="timing repetitions (best is reported)")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    records = make_trace(args.n, args.seed)
    config = StreamConfig.from_depth(1, 100, args.depth)
    batches = batchify(records, config.t0, horizon(records, config))
    found = kernels.backends()
    if "cython" not in found:
        print("compiled kernels not built; only the Python fallback is timed")

    cases = {
        "scan_remote_shell": lambda b: b.scan_remote_shell(tuple(records)),
        "combine_batches": lambda b: [b.combine_batches(x, y, 100) for x, y in zip(batches[::2], batches[1::2])],
        "level cascade": lambda b: cascade(b, batches, config),
    }
    print(f"{len(records)} records, depth {config.depth}, best of {args.repeat}")
    print(f"{'kernel':<20}" + "".join(f"{name:>12}" for name in found) + ("     speedup" if len(found) > 1 else ""))
    for label, fn in cases.items():
        times = {name: min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat)) for name, mod in found.items()}
        row = f"{label:<20}" + "".join(f"{t * 1e3:>10.1f}ms" for t in times.values())
        if len(times) > 1:
            row += f"{times['python'] / times['cython']:>11.2f}x"
        print(row)


if __name__ == "__main__":
    main()
