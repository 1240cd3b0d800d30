"""Run traces: structured records with a canonical line-delimited encoding.

Every record carries a millisecond timestamp, the terminal it concerns
(None for run-level records), a kind tag, and a kind-specific payload.
Serialization is canonical (sorted keys, no whitespace), so two runs that
behave identically produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .errors import MalformedTraceError

# Record kinds.
INIT = "init"
ANL = "anl"
TRANSITION = "transition"
HANDOFF = "handoff"


@dataclass(frozen=True)
class TraceRecord:
    t: int
    terminal: Optional[str]
    kind: str
    payload: dict

    def to_json(self) -> str:
        return json.dumps(
            {"t": self.t, "terminal": self.terminal, "kind": self.kind, "payload": self.payload},
            sort_keys=True,
            separators=(",", ":"),
        )


@dataclass
class Trace:
    records: list[TraceRecord] = field(default_factory=list)

    def append(self, t: int, terminal: Optional[str], kind: str, payload: dict) -> None:
        self.records.append(TraceRecord(t=t, terminal=terminal, kind=kind, payload=payload))

    def of_kind(self, kind: str, terminal: Optional[str] = None) -> list[TraceRecord]:
        return [
            r
            for r in self.records
            if r.kind == kind and (terminal is None or r.terminal == terminal)
        ]

    def to_ndjson(self) -> str:
        return "".join(r.to_json() + "\n" for r in self.records)

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_ndjson())


def parse_ndjson(lines: Iterable[str]) -> Trace:
    trace = Trace()
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            doc = json.loads(line)
            trace.append(doc["t"], doc["terminal"], doc["kind"], doc["payload"])
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise MalformedTraceError(f"line {lineno}: {exc}") from exc
    return trace


def read_trace(path: str | Path) -> Trace:
    with open(path) as fh:
        return parse_ndjson(fh)
