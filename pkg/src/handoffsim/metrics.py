"""Run metrics computed from traces.

Counts are tallied first and rates derived from them, so the imperative
and opportunist rates always sum to the total handoff rate exactly.
Quantities with no generating data in a run (mean latencies with no
handoffs, the best-network dwell fraction with no attached time) are
reported as None and serialize as empty cells, never as a fake zero.

Timeliness grades every completed handoff: premature handoffs were
rejected for not landing on the best network, tardy ones fired only after
the serving utility had already sat below the lower threshold for longer
than the tolerance, and the rest are timely.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .controller import HandoffRecord  # re-exported record type
from .trace import ANL, HANDOFF, INIT, TRANSITION, Trace

__all__ = [
    "HandoffRecord",
    "MetricSnapshot",
    "compute_metrics",
    "classify_timeliness",
    "handoff_success",
    "snapshots_to_csv",
    "snapshots_to_json",
    "CSV_COLUMNS",
]


def handoff_success(record: dict) -> bool:
    """A handoff counts as successful when evaluation accepted it."""
    return bool(record["accepted"])


@dataclass(frozen=True)
class MetricSnapshot:
    completed: int = 0
    accepted: int = 0
    rejected: int = 0
    hor: float = 0.0
    shor: float = 0.0
    shor_defined: bool = False
    ihor: float = 0.0
    ohor: float = 0.0
    thor: float = 0.0
    phor: float = 0.0
    dtib: Optional[float] = None
    il: Optional[float] = None
    ir: float = 0.0
    hol: Optional[float] = None
    dlat: Optional[float] = None
    exlat: Optional[float] = None
    evlat: Optional[float] = None
    impr: Optional[float] = None
    ouir: float = 0.0
    dr: float = 0.0
    dl: Optional[float] = None
    di: Optional[float] = None
    # Pass-through posture constants a scenario may supply; never synthesized.
    al: Optional[float] = None
    so: Optional[float] = None
    sso: Optional[float] = None
    dar: Optional[float] = None
    cb: Optional[float] = None
    cd: Optional[float] = None
    hob: Optional[float] = None
    counts: dict = field(default_factory=dict)

    def get(self, metric_id: str) -> Optional[float]:
        """Metric lookup by id for goal checking; None when unavailable."""
        table = {
            "HOR": self.hor,
            "SHOR": self.shor if self.shor_defined else None,
            "IHOR": self.ihor,
            "OHOR": self.ohor,
            "THOR": self.thor,
            "PHOR": self.phor,
            "DTIB": self.dtib,
            "IL": self.il,
            "IR": self.ir,
            "HOL": self.hol,
            "DLat": self.dlat,
            "ExLat": self.exlat,
            "EvLat": self.evlat,
            "ImpR": self.impr,
            "OUIR": self.ouir,
            "DR": self.dr,
            "DL": self.dl,
            "DI": self.di,
            "AL": self.al,
            "SO": self.so,
            "SSO": self.sso,
            "DAR": self.dar,
            "CB": self.cb,
            "CD": self.cd,
            "HOB": self.hob,
        }
        return table[metric_id]


def _segments(points: list[tuple[int, object]], horizon: int):
    """Turn (t, value) breakpoints into [t0, t1) segments within the horizon."""
    out = []
    for i, (t, value) in enumerate(points):
        t0 = max(t, 0)
        t1 = points[i + 1][0] if i + 1 < len(points) else horizon
        t1 = min(t1, horizon)
        if t1 > t0:
            out.append((t0, t1, value))
    return out


class _TerminalStats:
    """Single-pass accumulation of one terminal's trace records."""

    def __init__(self, terminal: str, horizon: int, tick: int, th_inf: float):
        self.terminal = terminal
        self.horizon = horizon
        self.tick = tick
        self.th_inf = th_inf
        self.records: list[dict] = []
        self.attach_points: list[tuple[int, Optional[str]]] = [(0, None)]
        self.anl_points: list[tuple[int, Optional[str]]] = [(0, None)]
        self.anl_by_t: dict[int, dict[str, float]] = {}
        self.counts = {
            "connects": 0,
            "link_losses": 0,
            "d2i": 0,
            "prep_entries": 0,
            "rollbacks": 0,
            "executions": 0,
        }

    def feed(self, rec) -> None:
        if rec.kind == HANDOFF:
            self.records.append(rec.payload)
        elif rec.kind == ANL:
            entries = rec.payload["entries"]
            head = entries[0][0] if entries else None
            self.anl_points.append((rec.t, head))
            self.anl_by_t[rec.t] = {net: value for net, value in entries}
        elif rec.kind == TRANSITION:
            p = rec.payload
            self.attach_points.append((rec.t, p["attached"]))
            for action in p["actions"]:
                if "connect" in action:
                    self.counts["connects"] += 1
            if p["event"] == "link_lost":
                self.counts["link_losses"] += 1
            if p["from"] == "disconnection" and p["to"] == "initiation":
                self.counts["d2i"] += 1
            if p["from"] == "initiation" and p["to"] in ("preparation", "execution"):
                self.counts["prep_entries"] += 1
            if p["from"] == "preparation" and p["to"] == "initiation":
                self.counts["rollbacks"] += 1
            if p["to"] == "execution" and p["from"] != "execution":
                self.counts["executions"] += 1

    def dwell_times(self) -> tuple[int, int]:
        """(time attached to the list head, total time attached), in ms."""
        attach_segs = _segments(self.attach_points, self.horizon)
        head_segs = _segments(self.anl_points, self.horizon)
        attached = 0
        on_head = 0
        hi = 0
        for a0, a1, net in attach_segs:
            if net is None:
                continue
            attached += a1 - a0
            for h0, h1, head in head_segs:
                lo = max(a0, h0)
                hi_ = min(a1, h1)
                if hi_ > lo and head == net:
                    on_head += hi_ - lo
        return on_head, attached

    def uf_series(self) -> list[tuple[int, int, float]]:
        """Serving-network utility per tick segment while attached."""
        attach_segs = _segments(self.attach_points, self.horizon)

        def attached_at(t: int) -> Optional[str]:
            for a0, a1, value in attach_segs:
                if a0 <= t < a1:
                    return value
            return None

        out = []
        for t in sorted(self.anl_by_t):
            if t >= self.horizon:
                continue
            net = attached_at(t)
            if net is None:
                continue
            value = self.anl_by_t[t].get(net)
            if value is None:
                continue
            out.append((t, min(t + self.tick, self.horizon), value))
        return out

    def degradation_runs(self) -> list[tuple[int, float]]:
        """Maximal below-threshold runs as (duration ms, mean deficit)."""
        runs = []
        cur_len = 0
        cur_deficit = 0.0
        prev_end = None
        for t0, t1, value in self.uf_series():
            below = value < self.th_inf
            contiguous = prev_end == t0
            if below:
                if cur_len and not contiguous:
                    runs.append((cur_len, cur_deficit / cur_len))
                    cur_len, cur_deficit = 0, 0.0
                cur_len += t1 - t0
                cur_deficit += (self.th_inf - value) * (t1 - t0)
            elif cur_len:
                runs.append((cur_len, cur_deficit / cur_len))
                cur_len, cur_deficit = 0, 0.0
            prev_end = t1
        if cur_len:
            runs.append((cur_len, cur_deficit / cur_len))
        return runs

    def below_span_before(self, t_trigger: int, from_net: str) -> int:
        """Continuous ms the from-network utility sat below th_inf just
        before the trigger instant."""
        span = 0
        ticks = [t for t in sorted(self.anl_by_t) if t <= t_trigger]
        for t in reversed(ticks):
            value = self.anl_by_t[t].get(from_net)
            if value is None or value >= self.th_inf:
                break
            span = t_trigger - t
        return span


def _collect(trace: Trace, horizon: int, terminal: Optional[str]):
    init = None
    for rec in trace.records:
        if rec.kind == INIT and rec.terminal is None:
            init = rec.payload
            break
    tick = init["tick_ms"] if init else 1
    th_inf = init["controller"]["th_inf"] if init else float("-inf")
    constants = dict(init.get("metrics_constants", {})) if init else {}
    terminals = init["terminals"] if init else []
    if terminal is not None:
        terminals = [terminal]
    stats = {tid: _TerminalStats(tid, horizon, tick, th_inf) for tid in terminals}
    for rec in trace.records:
        if rec.terminal in stats:
            stats[rec.terminal].feed(rec)
    return stats, init, constants


def classify_timeliness(
    record: dict, trace: Trace, tolerance_ms: Optional[int] = None
) -> str:
    """Grade one completed handoff as timely, tardy, or premature."""
    stats, init, _ = _collect(trace, _trace_horizon(trace), record["terminal"])
    if tolerance_ms is None:
        tolerance_ms = _default_tolerance(init)
    st = stats[record["terminal"]]
    return _timeliness(record, st, tolerance_ms)


def _timeliness(record: dict, st: _TerminalStats, tolerance_ms: int) -> str:
    if not record["accepted"] and "NotBest" in record["reject_reasons"]:
        return "premature"
    if st.below_span_before(record["t_trigger"], record["from_net"]) > tolerance_ms:
        return "tardy"
    return "timely"


def _default_tolerance(init) -> int:
    if not init:
        return 0
    return init["controller"]["dwell_sp"] + init["tick_ms"]


def _trace_horizon(trace: Trace) -> int:
    for rec in trace.records:
        if rec.kind == INIT and rec.terminal is None:
            return rec.payload["duration_ms"]
    return max((r.t for r in trace.records), default=0)


def _mean(values: list[float]) -> Optional[float]:
    if not values:
        return None
    return sum(values) / len(values)


def compute_metrics(
    trace: Trace,
    horizon_ms: Optional[int] = None,
    terminal: Optional[str] = None,
    tardy_tolerance_ms: Optional[int] = None,
) -> MetricSnapshot:
    """Compute the snapshot for one terminal, or pooled over all of them."""
    if horizon_ms is None:
        horizon_ms = _trace_horizon(trace)
    stats, init, constants = _collect(trace, horizon_ms, terminal)
    if tardy_tolerance_ms is None:
        tardy_tolerance_ms = _default_tolerance(init)

    records: list[tuple[dict, _TerminalStats]] = []
    counts = {"connects": 0, "link_losses": 0, "d2i": 0, "prep_entries": 0,
              "rollbacks": 0, "executions": 0}
    on_head = 0
    attached = 0
    runs: list[tuple[int, float]] = []
    for st in stats.values():
        records.extend((r, st) for r in st.records)
        for key in counts:
            counts[key] += st.counts[key]
        oh, at = st.dwell_times()
        on_head += oh
        attached += at
        runs.extend(st.degradation_runs())
    records.sort(key=lambda pair: (pair[0]["t_eval_done"], pair[0]["terminal"]))

    completed = len(records)
    accepted = sum(1 for r, _ in records if r["accepted"])
    imperative = sum(1 for r, _ in records if r["reason"] == "imperative")
    opportunist = completed - imperative
    grades = [_timeliness(r, st, tardy_tolerance_ms) for r, st in records]
    tardy = grades.count("tardy")
    premature = grades.count("premature")
    timely = grades.count("timely")

    horizon_s = horizon_ms / 1000.0
    def rate(count: int) -> float:
        return count / horizon_s if horizon_s > 0 else 0.0

    ihor = rate(imperative)
    ohor = rate(opportunist)
    impr_terms = [
        r["uf_new"] / r["uf_old"] for r, _ in records if r["accepted"] and r["uf_old"] != 0.0
    ]

    counts.update(
        completed=completed,
        accepted=accepted,
        rejected=completed - accepted,
        imperative=imperative,
        opportunist=opportunist,
        timely=timely,
        tardy=tardy,
        premature=premature,
    )

    return MetricSnapshot(
        completed=completed,
        accepted=accepted,
        rejected=completed - accepted,
        hor=ihor + ohor,
        shor=(accepted / completed) if completed else 0.0,
        shor_defined=completed > 0,
        ihor=ihor,
        ohor=ohor,
        thor=rate(tardy),
        phor=rate(premature),
        dtib=(on_head / attached) if attached else None,
        il=_mean([float(r["t_switch_done"] - r["t_trigger"]) for r, _ in records]),
        ir=rate(counts["executions"] + counts["link_losses"]),
        hol=_mean([float(r["t_eval_done"] - r["t_prep"]) for r, _ in records]),
        dlat=_mean([float(r["t_trigger"] - r["t_prep"]) for r, _ in records]),
        exlat=_mean([float(r["t_switch_done"] - r["t_trigger"]) for r, _ in records]),
        evlat=_mean([float(r["t_eval_done"] - r["t_switch_done"]) for r, _ in records]),
        impr=_mean(impr_terms),
        ouir=0.0,
        dr=rate(len(runs)),
        dl=_mean([float(length) for length, _ in runs]),
        di=_mean([deficit for _, deficit in runs]),
        al=constants.get("AL"),
        so=constants.get("SO"),
        sso=constants.get("SSO"),
        dar=constants.get("DAR"),
        counts=counts,
    )


CSV_COLUMNS = [
    "terminal",
    "completed",
    "accepted",
    "rejected",
    "hor",
    "shor",
    "shor_defined",
    "ihor",
    "ohor",
    "thor",
    "phor",
    "dtib",
    "il_ms",
    "ir",
    "hol_ms",
    "dlat_ms",
    "exlat_ms",
    "evlat_ms",
    "impr",
    "ouir",
    "dr",
    "dl_ms",
    "di",
    "al",
    "so",
    "sso",
    "dar",
    "cb",
    "cd",
    "hob",
    "connects",
    "link_losses",
    "prep_entries",
    "rollbacks",
    "executions",
    "timely",
    "tardy",
    "premature",
]


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _row(label: str, snap: MetricSnapshot) -> list[str]:
    values = {
        "terminal": label,
        "completed": snap.completed,
        "accepted": snap.accepted,
        "rejected": snap.rejected,
        "hor": snap.hor,
        "shor": snap.shor if snap.shor_defined else None,
        "shor_defined": snap.shor_defined,
        "ihor": snap.ihor,
        "ohor": snap.ohor,
        "thor": snap.thor,
        "phor": snap.phor,
        "dtib": snap.dtib,
        "il_ms": snap.il,
        "ir": snap.ir,
        "hol_ms": snap.hol,
        "dlat_ms": snap.dlat,
        "exlat_ms": snap.exlat,
        "evlat_ms": snap.evlat,
        "impr": snap.impr,
        "ouir": snap.ouir,
        "dr": snap.dr,
        "dl_ms": snap.dl,
        "di": snap.di,
        "al": snap.al,
        "so": snap.so,
        "sso": snap.sso,
        "dar": snap.dar,
        "cb": snap.cb,
        "cd": snap.cd,
        "hob": snap.hob,
        "connects": snap.counts.get("connects", 0),
        "link_losses": snap.counts.get("link_losses", 0),
        "prep_entries": snap.counts.get("prep_entries", 0),
        "rollbacks": snap.counts.get("rollbacks", 0),
        "executions": snap.counts.get("executions", 0),
        "timely": snap.counts.get("timely", 0),
        "tardy": snap.counts.get("tardy", 0),
        "premature": snap.counts.get("premature", 0),
    }
    return [_cell(values[col]) for col in CSV_COLUMNS]


def snapshots_to_csv(rows: Sequence[tuple[str, MetricSnapshot]]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for label, snap in rows:
        lines.append(",".join(_row(label, snap)))
    return "\n".join(lines) + "\n"


def snapshots_to_json(rows: Sequence[tuple[str, MetricSnapshot]]) -> str:
    doc = {}
    for label, snap in rows:
        entry = dict(zip(CSV_COLUMNS, _row(label, snap)))
        entry.pop("terminal")
        doc[label] = entry
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
