"""Line-oriented text format for designs.

    BARANYAI v1 n=16 k=4 classes=455 provenance=BP:double(t=8)[S:280,T:168,F:7]
    0 1 2 3;4 5 6 7;8 9 10 11;12 13 14 15
    ...

One parallel class per line, blocks joined by ``;``.  The provenance token
carries the design kind, a construction trace and the per-type class counts.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Iterator, TextIO

import numpy as np

from .core import Design, DesignError, Kind

MAGIC = "BARANYAI"
VERSION = "v1"

_HEADER = re.compile(
    r"^BARANYAI v1 n=(?P<n>\d+) k=(?P<k>\d+) classes=(?P<c>\d+) provenance=(?P<prov>\S*)$"
)
_TAG = re.compile(r"^(?P<kind>[A-Z]+):(?P<trace>[^\[\]]*)(?:\[(?P<seg>[^\]]*)\])?$")


def provenance_tag(d: Design) -> str:
    seg = ",".join(f"{label}:{count}" for label, count in d.segments)
    trace = d.provenance or "unknown"
    return f"{d.kind.value}:{trace}" + (f"[{seg}]" if seg else "")


def parse_tag(tag: str) -> tuple[Kind, str, tuple[tuple[str, int], ...]]:
    m = _TAG.match(tag)
    if not m:
        raise DesignError(f"malformed provenance tag {tag!r}")
    try:
        kind = Kind(m["kind"])
    except ValueError:
        raise DesignError(f"unknown design kind {m['kind']!r}") from None
    segments = []
    if m["seg"]:
        for part in m["seg"].split(","):
            label, _, count = part.partition(":")
            if not count.isdigit():
                raise DesignError(f"malformed segment {part!r}")
            segments.append((label, int(count)))
    return kind, m["trace"], tuple(segments)


def header_line(d: Design) -> str:
    return f"{MAGIC} {VERSION} n={d.n} k={d.k} classes={len(d)} provenance={provenance_tag(d)}"


def format_class(blocks, t: int | None = None) -> str:
    """One class line; with ``t`` points are shown as ``(x,i)`` labels."""
    if t is None:
        return ";".join(" ".join(str(int(p)) for p in b) for b in blocks)
    return ";".join(" ".join(f"({int(p) % t},{int(p) // t})" for p in b) for b in blocks)


def format_block(b, t: int | None = None) -> str:
    return format_class([b], t)


def iter_lines(d: Design) -> Iterator[str]:
    yield header_line(d)
    for row in d.classes.tolist():
        yield ";".join(" ".join(map(str, b)) for b in row)


def dumps(d: Design) -> str:
    return "\n".join(iter_lines(d)) + "\n"


def write(d: Design, fh: TextIO) -> None:
    for line in iter_lines(d):
        fh.write(line)
        fh.write("\n")


def save(d: Design, path: str | Path) -> None:
    Path(path).write_text(dumps(d), encoding="ascii", newline="\n")


def loads(text: str) -> Design:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise DesignError("empty design file")
    m = _HEADER.match(lines[0])
    if not m:
        raise DesignError(f"bad header line: {lines[0][:80]!r}")
    n, k, count = int(m["n"]), int(m["k"]), int(m["c"])
    kind, trace, segments = parse_tag(m["prov"])
    body = lines[1:]
    if len(body) != count:
        raise DesignError(f"header announces {count} classes, body has {len(body)}")
    if k <= 0 or n % k:
        raise DesignError(f"k={k} does not divide n={n}")
    per = n // k
    for i, line in enumerate(body, start=1):
        if line.count(";") != per - 1:
            raise DesignError(f"class line {i} does not have {per} blocks")
    tokens = " ".join(body).replace(";", " ").split()
    if len(tokens) != count * n:
        raise DesignError("class lines do not hold n points each")
    try:
        arr = np.array(tokens, dtype=np.int64)
    except ValueError as exc:
        raise DesignError(f"non-integer point: {exc}") from None
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise DesignError(f"point outside [0, {n})")
    arr = arr.astype(np.int32).reshape(count, per, k)
    return Design(kind, n, k, arr, trace, segments)


def load(path: str | Path) -> Design:
    return loads(Path(path).read_text(encoding="ascii"))
