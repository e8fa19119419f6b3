import pytest
from hypothesis import given
from hypothesis import strategies as st

from pww.trace import (
    Record,
    SyscallEvent,
    TraceParseError,
    parse_line,
    parse_trace,
    read_trace,
    serialize_record,
    write_trace,
)


def test_parse_line_episode_example():
    time, ev = parse_line("accept fd=5 => 6")
    assert time is None
    assert ev == SyscallEvent("accept", (("fd", "5"),), "6")


def test_parse_line_bare_name():
    assert parse_line("brk") == (None, SyscallEvent("brk"))


def test_parse_line_timestamp_prefix():
    assert parse_line("@42 dup fd=6 => 2") == (42, SyscallEvent("dup", (("fd", "6"),), "2"))


def test_parse_line_tabs_and_runs_of_spaces():
    assert parse_line("read\tfd=3   count=10  =>  7")[1] == SyscallEvent("read", (("fd", "3"), ("count", "10")), "7")


@pytest.mark.parametrize(
    "line, reason",
    [
        ("read fd", "malformed argument"),
        ("read fd=3 =>", "no return value"),
        ("   ", "empty line"),
        ("@7", "empty name"),
        ("=> 3", "empty name"),
        ("read fd=3 fd=4", "duplicate"),
        ("@x read", "timestamp"),
        ("read =5", "malformed argument"),
    ],
)
def test_parse_line_errors(line, reason):
    with pytest.raises(TraceParseError) as exc:
        parse_line(line)
    assert reason in str(exc.value)
    assert repr(line) in str(exc.value)


def test_parse_trace_implicit_times():
    recs = parse_trace(["brk", "brk", "brk"])
    assert [r.time for r in recs] == [0, 1, 2]


def test_parse_trace_empty():
    assert parse_trace([]) == []


def test_parse_trace_ties_allowed():
    recs = parse_trace(["@0 brk", "@5 brk", "@5 brk"])
    assert [r.time for r in recs] == [0, 5, 5]


def test_parse_trace_decreasing_time_names_line():
    with pytest.raises(TraceParseError) as exc:
        parse_trace(["@3 brk", "@2 read fd=1"])
    assert exc.value.lineno == 2
    assert "decreases" in str(exc.value)


def test_parse_trace_reports_line_number_of_bad_line():
    with pytest.raises(TraceParseError) as exc:
        parse_trace(["brk", "read fd"])
    assert exc.value.lineno == 2


def test_serialize_examples():
    assert serialize_record(Record(0, SyscallEvent("accept", (("fd", "5"),), "6")), with_time=False) == "accept fd=5 => 6"
    assert serialize_record(Record(0, SyscallEvent("brk")), with_time=False) == "brk"
    assert serialize_record(Record(42, SyscallEvent("dup", (("fd", "6"),), "2"))) == "@42 dup fd=6 => 2"


def test_event_validation():
    with pytest.raises(ValueError):
        SyscallEvent("")
    with pytest.raises(ValueError):
        SyscallEvent("a=b")
    with pytest.raises(ValueError):
        SyscallEvent("read", (("fd", "1"), ("fd", "2")))
    with pytest.raises(ValueError):
        Record(-1, SyscallEvent("brk"))


token = st.text(
    alphabet=st.characters(min_codepoint=33, max_codepoint=126, blacklist_characters="=@"), min_size=1, max_size=6
).filter(lambda t: t != "=>")
value = st.text(alphabet=st.characters(min_codepoint=33, max_codepoint=126), min_size=1, max_size=6).filter(
    lambda t: t != "=>"
)
events = st.builds(
    SyscallEvent,
    token,
    st.dictionaries(token, value, max_size=4).map(lambda d: tuple(d.items())),
    st.none() | value,
)


@given(events, st.integers(min_value=0, max_value=10**9))
def test_round_trip(ev, time):
    rec = Record(time, ev)
    parsed_time, parsed = parse_line(serialize_record(rec))
    assert Record(parsed_time, parsed) == rec
    assert parsed.args == ev.args


@given(st.lists(events, max_size=20))
def test_implicit_timing_is_line_index(evs):
    recs = parse_trace([serialize_record(Record(0, e), with_time=False) for e in evs])
    assert [r.time for r in recs] == list(range(len(evs)))
    assert [r.event for r in recs] == evs


def test_file_round_trip(tmp_path):
    recs = [Record(0, SyscallEvent("brk")), Record(3, SyscallEvent("accept", (("fd", "5"),), "6"))]
    path = tmp_path / "t.trace"
    write_trace(path, recs)
    assert path.read_bytes() == b"@0 brk\n@3 accept fd=5 => 6\n"
    assert read_trace(path) == recs
