"""System-call trace format.

One record per line::

    [@<time> ]<name>[ <key>=<value>]...[ => <retval>]

The ``@<time>`` prefix is optional. Lines without it get the zero-based
line index as their time, i.e. one call per time unit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Iterator


class TraceParseError(ValueError):
    """Raised for a malformed or out-of-order trace line."""

    def __init__(self, line: str, reason: str, lineno: int | None = None):
        self.line = line
        self.reason = reason
        self.lineno = lineno
        where = f"line {lineno}: " if lineno is not None else ""
        super().__init__(f"{where}{reason}: {line!r}")


def _check_token(tok: str, what: str) -> None:
    if not tok or any(c.isspace() for c in tok):
        raise ValueError(f"{what} must be a non-empty token without whitespace: {tok!r}")


@dataclass(frozen=True)
class SyscallEvent:
    name: str
    args: tuple[tuple[str, str], ...] = ()
    retval: str | None = None

    def __post_init__(self) -> None:
        _check_token(self.name, "name")
        if "=" in self.name:
            raise ValueError(f"name must not contain '=': {self.name!r}")
        object.__setattr__(self, "args", tuple((k, v) for k, v in self.args))
        seen = set()
        for k, v in self.args:
            _check_token(k, "arg key")
            _check_token(v, "arg value")
            if "=" in k:
                raise ValueError(f"arg key must not contain '=': {k!r}")
            if k in seen:
                raise ValueError(f"duplicate arg key {k!r}")
            seen.add(k)
        if self.retval is not None:
            _check_token(self.retval, "retval")

    def arg(self, key: str) -> str | None:
        for k, v in self.args:
            if k == key:
                return v
        return None

    def __str__(self) -> str:
        return format_event(self)


@dataclass(frozen=True)
class Record:
    """A timestamped stream item. ``event`` is usually a SyscallEvent.

    Equality compares time and event; ordering compares time only.
    """

    time: int
    event: Any

    def __lt__(self, other: Record) -> bool:
        return self.time < other.time

    def __le__(self, other: Record) -> bool:
        return self.time <= other.time

    def __gt__(self, other: Record) -> bool:
        return self.time > other.time

    def __ge__(self, other: Record) -> bool:
        return self.time >= other.time

    def __post_init__(self) -> None:
        if self.time < 0:
            raise ValueError(f"record time must be non-negative, got {self.time}")


def format_event(event: SyscallEvent) -> str:
    parts = [event.name]
    parts.extend(f"{k}={v}" for k, v in event.args)
    if event.retval is not None:
        parts.extend(("=>", event.retval))
    return " ".join(parts)


def parse_line(text: str) -> tuple[int | None, SyscallEvent]:
    """Parse one trace line into ``(explicit_time_or_None, event)``."""
    tokens = text.replace("\t", " ").split()
    if not tokens:
        raise TraceParseError(text, "empty line")
    time = None
    if tokens[0].startswith("@"):
        try:
            time = int(tokens[0][1:])
        except ValueError:
            raise TraceParseError(text, "bad timestamp prefix") from None
        if time < 0:
            raise TraceParseError(text, "negative timestamp")
        tokens = tokens[1:]
        if not tokens:
            raise TraceParseError(text, "empty name")
    name, rest = tokens[0], tokens[1:]
    if name == "=>" or "=" in name:
        raise TraceParseError(text, "empty name")

    retval = None
    if "=>" in rest:
        i = rest.index("=>")
        tail = rest[i + 1:]
        if not tail:
            raise TraceParseError(text, "'=>' with no return value")
        if len(tail) > 1:
            raise TraceParseError(text, "trailing tokens after return value")
        retval = tail[0]
        rest = rest[:i]

    args = []
    for tok in rest:
        key, sep, value = tok.partition("=")
        if not sep or not key or not value:
            raise TraceParseError(text, f"malformed argument {tok!r}")
        args.append((key, value))
    try:
        event = SyscallEvent(name, tuple(args), retval)
    except ValueError as e:
        raise TraceParseError(text, str(e)) from None
    return time, event


def parse_trace(source: Iterable[str]) -> list[Record]:
    """Parse trace lines. Blank lines are skipped but still count as a time unit
    for implicit timing; explicit times must be non-decreasing."""
    records: list[Record] = []
    last = 0
    for idx, line in enumerate(source):
        if not line.strip():
            continue
        try:
            time, event = parse_line(line.rstrip("\n"))
        except TraceParseError as e:
            raise TraceParseError(e.line, e.reason, idx + 1) from None
        if time is None:
            time = idx
        if time < last:
            raise TraceParseError(line.rstrip("\n"), f"timestamp {time} decreases (previous {last})", idx + 1)
        last = time
        records.append(Record(time, event))
    return records


def serialize_record(record: Record, with_time: bool = True) -> str:
    text = format_event(record.event)
    return f"@{record.time} {text}" if with_time else text


def iter_lines(records: Iterable[Record], with_time: bool = True) -> Iterator[str]:
    for r in records:
        yield serialize_record(r, with_time) + "\n"


def read_trace(path) -> list[Record]:
    with open(path, encoding="utf-8") as f:
        return parse_trace(f)


def write_trace(path, records: Iterable[Record], with_time: bool = True) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.writelines(iter_lines(records, with_time))
