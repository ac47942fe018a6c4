"""Ink data types and a reader/writer for a closed UNIPEN-subset text format.

The subset understands ``.VERSION``, ``.HIERARCHY``, ``.COORD``, ``.X_DIM``,
``.Y_DIM``, ``.SEGMENT``, ``.PEN_DOWN``, ``.PEN_UP`` and whitespace-separated
``x y [t]`` coordinate lines.  Any other ``.KEYWORD`` line is kept as an opaque
comment so a parsed document can be written back out unchanged.  Opaque lines
that occur inside a segment are re-emitted after that segment's block.
"""

from __future__ import annotations

import math
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

__all__ = [
    "Point",
    "Stroke",
    "InkSample",
    "SymbolClass",
    "InkDocument",
    "UnipenError",
    "parse_unipen",
    "write_unipen",
    "validate",
]

_HEADER_KEYWORDS = (".VERSION", ".HIERARCHY", ".COORD", ".X_DIM", ".Y_DIM")
_LABEL_RE = re.compile(r'"([^"]*)"')


class UnipenError(ValueError):
    """Malformed UNIPEN input.  ``line_no`` is 1-based."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class Point:
    """One pen sample.  ``t`` is milliseconds, or None when the source had no
    timestamp column; feature extraction depends only on point order."""

    x: float
    y: float
    t: float | None = None


@dataclass(frozen=True)
class Stroke:
    """A pen-down run: one or more points in writing order."""

    points: tuple[Point, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class InkSample:
    """A recognition unit: the strokes of one written symbol, optionally labeled."""

    strokes: tuple[Stroke, ...]
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(
            self,
            "strokes",
            tuple(s if isinstance(s, Stroke) else Stroke(tuple(s)) for s in self.strokes),
        )

    @property
    def point_count(self) -> int:
        return sum(len(s) for s in self.strokes)


@dataclass(frozen=True)
class SymbolClass:
    """A recognizable symbol: a class id plus the text it emits on recognition."""

    id: str
    codepoints: str

    def __post_init__(self):
        if not self.id:
            raise ValueError("symbol class id must be non-empty")
        if not self.codepoints:
            raise ValueError(f"symbol class {self.id!r} has no codepoints")


class InkDocument(Sequence):
    """A parsed UNIPEN document: the samples plus every header/opaque line, in
    order, so :func:`write_unipen` can reproduce the original text."""

    def __init__(self, events: Iterable[str | InkSample]):
        self.events: list[str | InkSample] = list(events)
        self.samples: list[InkSample] = [e for e in self.events if isinstance(e, InkSample)]

    def __len__(self) -> int:
        return len(self.samples)

    def __getitem__(self, i):
        return self.samples[i]

    def __eq__(self, other):
        if isinstance(other, InkDocument):
            return self.events == other.events
        return self.samples == list(other)


def _parse_number(line_no: int, token: str, what: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise UnipenError(line_no, f"bad {what} {token!r}") from None
    if not math.isfinite(value):
        raise UnipenError(line_no, f"non-finite {what} {token!r}")
    return value


def _parse_coordinate(line_no: int, line: str) -> Point:
    fields = line.split()
    if len(fields) not in (2, 3):
        raise UnipenError(line_no, f"coordinate line needs 'x y [t]', got {len(fields)} fields")
    x = _parse_number(line_no, fields[0], "x coordinate")
    y = _parse_number(line_no, fields[1], "y coordinate")
    t = None
    if len(fields) == 3:
        t = _parse_number(line_no, fields[2], "timestamp")
        if t < 0:
            raise UnipenError(line_no, f"negative timestamp {t}")
    return Point(x, y, t)


def _check_header(line_no: int, keyword: str, args: list[str]) -> None:
    if keyword == ".VERSION":
        if len(args) != 1:
            raise UnipenError(line_no, ".VERSION takes exactly one value")
    elif keyword == ".HIERARCHY":
        if args != ["CHARACTER"]:
            raise UnipenError(line_no, ".HIERARCHY must be CHARACTER in this subset")
    elif keyword == ".COORD":
        if args not in (["X", "Y"], ["X", "Y", "T"]):
            raise UnipenError(line_no, ".COORD must be 'X Y' or 'X Y T'")
    elif keyword in (".X_DIM", ".Y_DIM"):
        if len(args) != 1 or not args[0].isdigit():
            raise UnipenError(line_no, f"{keyword} takes one integer value")


class _SegmentBuilder:
    def __init__(self, line_no: int, label: str | None):
        self.line_no = line_no
        self.label = label
        self.strokes: list[Stroke] = []
        self.trailing: list[str] = []

    def finish(self) -> InkSample:
        if not self.strokes:
            raise UnipenError(self.line_no, "segment contains no strokes")
        return InkSample(tuple(self.strokes), self.label)


def parse_unipen(text: str) -> InkDocument:
    """Parse a UNIPEN-subset document into an :class:`InkDocument`.

    One sample is produced per ``.SEGMENT CHARACTER`` block; a ``.PEN_DOWN``
    before any segment opens an implicit unlabeled sample.
    """
    events: list[str | InkSample] = []
    segment: _SegmentBuilder | None = None
    stroke_points: list[Point] | None = None
    stroke_line = 0

    def close_segment() -> None:
        nonlocal segment
        if segment is not None:
            events.append(segment.finish())
            events.extend(segment.trailing)
            segment = None

    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line:
            continue
        if not line.startswith("."):
            if stroke_points is None:
                raise UnipenError(line_no, "coordinate line outside .PEN_DOWN/.PEN_UP")
            stroke_points.append(_parse_coordinate(line_no, line))
            continue

        keyword, *rest = line.split(None, 1)
        args = rest[0].split() if rest else []
        if stroke_points is not None and keyword != ".PEN_UP":
            raise UnipenError(line_no, f"{keyword} not allowed inside a pen-down run")

        if keyword == ".SEGMENT":
            if not args or args[0] != "CHARACTER":
                raise UnipenError(line_no, ".SEGMENT must use the CHARACTER level")
            close_segment()
            match = None
            for match in _LABEL_RE.finditer(rest[0]):
                pass
            segment = _SegmentBuilder(line_no, match.group(1) if match else None)
        elif keyword == ".PEN_DOWN":
            if args:
                raise UnipenError(line_no, ".PEN_DOWN takes no arguments")
            if segment is None:
                segment = _SegmentBuilder(line_no, None)
            stroke_points = []
            stroke_line = line_no
        elif keyword == ".PEN_UP":
            if args:
                raise UnipenError(line_no, ".PEN_UP takes no arguments")
            if stroke_points is None:
                raise UnipenError(line_no, ".PEN_UP without a preceding .PEN_DOWN")
            if not stroke_points:
                raise UnipenError(stroke_line, "pen-down run contains no coordinates")
            segment.strokes.append(Stroke(tuple(stroke_points)))
            stroke_points = None
        elif keyword in _HEADER_KEYWORDS:
            _check_header(line_no, keyword, args)
            (events if segment is None else segment.trailing).append(raw.rstrip())
        elif re.fullmatch(r"\.[A-Z][A-Z0-9_]*", keyword):
            (events if segment is None else segment.trailing).append(raw.rstrip())
        else:
            raise UnipenError(line_no, f"unrecognized keyword line {keyword!r}")

    if stroke_points is not None:
        raise UnipenError(stroke_line, ".PEN_DOWN never closed by .PEN_UP")
    close_segment()
    return InkDocument(events)


def _format_number(value: float) -> str:
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def _write_sample(sample: InkSample, out: list[str]) -> None:
    if sample.label is None:
        out.append(".SEGMENT CHARACTER")
    else:
        if '"' in sample.label:
            raise ValueError(f"label {sample.label!r} contains a double quote")
        out.append(f'.SEGMENT CHARACTER ? ? "{sample.label}"')
    for stroke in sample.strokes:
        out.append(".PEN_DOWN")
        for p in stroke.points:
            coords = f"{_format_number(p.x)} {_format_number(p.y)}"
            out.append(coords if p.t is None else f"{coords} {_format_number(p.t)}")
        out.append(".PEN_UP")


def write_unipen(samples: Iterable[InkSample] | InkDocument) -> str:
    """Render samples as a UNIPEN-subset document that :func:`parse_unipen`
    inverts exactly.  An :class:`InkDocument` is replayed with its original
    header and opaque lines; a plain sequence gets a canonical header."""
    out: list[str] = []
    if isinstance(samples, InkDocument):
        for event in samples.events:
            if isinstance(event, InkSample):
                _write_sample(event, out)
            else:
                out.append(event)
    else:
        out.extend([".VERSION 1.0", ".HIERARCHY CHARACTER", ".COORD X Y T"])
        for sample in samples:
            _write_sample(sample, out)
    return "\n".join(out) + "\n"


def validate(sample: InkSample) -> list[str]:
    """Return the list of invariant violations (empty for a well-formed sample)."""
    violations: list[str] = []
    if not sample.strokes:
        violations.append("no strokes")
    for i, stroke in enumerate(sample.strokes):
        if len(stroke) == 0:
            violations.append(f"empty stroke at index {i}")
            continue
        last_t: float | None = None
        for j, p in enumerate(stroke.points):
            if not (math.isfinite(p.x) and math.isfinite(p.y)):
                violations.append(f"non-finite coordinate at stroke {i}, point {j}")
            if p.t is not None:
                if p.t < 0 or not math.isfinite(p.t):
                    violations.append(f"bad timestamp at stroke {i}, point {j}")
                elif last_t is not None and p.t < last_t:
                    violations.append(f"decreasing timestamp at stroke {i}, point {j}")
                else:
                    last_t = p.t
    return violations
