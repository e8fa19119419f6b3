import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pww.detect import oracle_detect
from pww.synth import InjectionError, InjectionSpec, gen_background, inject_episode
from pww.trace import parse_trace, serialize_record


def test_background_times_rate_one():
    rs = gen_background(10_000, 1, seed=0)
    assert [r.time for r in rs] == list(range(10_000))
    assert not any(r.event.name == "accept" for r in rs)


def test_background_rate_spacing():
    assert [r.time for r in gen_background(6, 2, seed=0)] == [0, 0, 1, 1, 2, 2]
    assert [r.time for r in gen_background(3, 0.5, seed=0)] == [0, 2, 4]


def test_background_empty_and_deterministic():
    assert gen_background(0) == []
    assert gen_background(50, 1, seed=4) == gen_background(50, 1, seed=4)
    assert gen_background(50, 1, seed=4) != gen_background(50, 1, seed=5)


@pytest.mark.parametrize("alphabet", [(), ("read", "accept")])
def test_background_alphabet_checks(alphabet):
    with pytest.raises(ValueError):
        gen_background(5, 1, 0, alphabet)


def test_inject_into_empty():
    out = inject_episode([], InjectionSpec(0, 1))
    assert [r.time for r in out] == [0, 1, 2, 3, 4]
    assert [r.event.name for r in out] == ["accept", "dup", "dup", "dup", "execve"]
    assert len(oracle_detect(out)) == 1


def test_inject_thins_background():
    bg = gen_background(2000, 1, seed=2)
    spec = InjectionSpec(300, 128, max_span_records=100, seed=1)
    out = inject_episode(bg, spec)
    inside = [r for r in out if 300 <= r.time <= 300 + 512]
    # episode records plus thinned background strictly inside the interval,
    # plus the untouched background at both end instants
    background_inside = [r for r in inside if r.event.name not in ("accept", "dup", "execve")]
    assert len([r for r in background_inside if 300 < r.time < 812]) <= 95
    first = out.index(next(r for r in out if r.event.name == "accept"))
    last = out.index(next(r for r in out if r.event.name == "execve"))
    assert last - first + 1 <= 100
    (m,) = oracle_detect(out)
    assert m.matched_times == (300, 428, 556, 684, 812)


def test_inject_keeps_background_when_room():
    bg = gen_background(100, 1, seed=2)
    out = inject_episode(bg, InjectionSpec(10, 2, max_span_records=100))
    assert len(out) == 105


def test_inject_without_span_limit_keeps_everything():
    bg = gen_background(1000, 1, seed=2)
    assert len(inject_episode(bg, InjectionSpec(10, 100, max_span_records=None))) == 1005


@pytest.mark.parametrize(
    "spec", [InjectionSpec(-1, 1), InjectionSpec(0, -1), InjectionSpec(0, 1, max_span_records=4)]
)
def test_inject_errors(spec):
    with pytest.raises(InjectionError):
        inject_episode([], spec)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32))
def test_injection_sorted_parseable_and_adds_one_match(seed):
    rng = random.Random(seed)
    bg = gen_background(rng.randint(0, 600), rng.choice([0.5, 1, 3]), seed)
    spec = InjectionSpec(rng.randint(0, 300), rng.randint(0, 60), max_span_records=rng.randint(5, 100), seed=seed)
    out = inject_episode(bg, spec)
    times = [r.time for r in out]
    assert times == sorted(times)
    assert parse_trace(serialize_record(r) for r in out) == out
    assert len(oracle_detect(out)) == len(oracle_detect(bg)) + 1
    assert inject_episode(bg, spec) == out
    names = [r.event.name for r in out]
    span = names.index("execve") - names.index("accept") + 1
    assert span <= spec.max_span_records
