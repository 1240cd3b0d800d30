"""Handoff controller: trigger predicates, planning, and the five-phase machine.

The controller walks a terminal through five phases:

  Disconnection -> Initiation -> Preparation -> Execution -> Evaluation

Initiation watches the ranked network list.  Preparation tracks one target
and decides whether a switch is justified; it may roll back.  Execution is
committed: once a switch starts nothing cancels it, and the machine can
only move forward into Evaluation, which grades the finished handoff and
returns to Initiation.

Triggers are gated three ways: the target must be sufficiently better than
the serving network (a hysteresis margin), it must have stayed that way
for a configured dwell time, and the serving network's utility must supply
a reason to move at all: imperative (below the lower threshold) or
opportunist (above the upper threshold).

``step`` is a pure function: the returned state and actions depend only on
the inputs.  All mutable memory (recent score samples, the last seen
network list, the in-flight handoff) lives inside ControllerState.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Mapping, Optional, Sequence, Union

from .context import GoalSpec, goal_holds
from .desirability import AvailableNetworkList, best
from .errors import IllegalEventError, InsufficientSamplesError, PolicyGapError
from .taxonomy import Attachment, HandoffType, Layer, classify


class Phase(Enum):
    DISCONNECTION = "disconnection"
    INITIATION = "initiation"
    PREPARATION = "preparation"
    EXECUTION = "execution"
    EVALUATION = "evaluation"


class Reason(Enum):
    IMPERATIVE = "imperative"
    OPPORTUNIST = "opportunist"


class Strategy(Enum):
    REACTIVE = "reactive"
    PROACTIVE = "proactive"


DEFAULT_LAYER_METHODS: Mapping[Layer, str] = {
    Layer.L1: "MAHO",
    Layer.L2: "MAHO",
    Layer.L3: "MIP",
    Layer.L4_7: "SIP",
}


@dataclass(frozen=True)
class PolicyTable:
    """Maps (layer, application type, mobility) to a handoff method label.

    Lookup tries exact keys first, then wildcard ("*") fallbacks, then the
    per-layer defaults.  A user-supplied table with no applicable entry and
    no default for the layer is a configuration gap and raises.
    """

    entries: Mapping[tuple[str, str, str], str] = field(default_factory=dict)
    defaults: Mapping[Layer, str] = field(default_factory=lambda: dict(DEFAULT_LAYER_METHODS))

    def lookup(self, layer: Layer, app_type: str, mobility: str) -> str:
        for key in (
            (layer.value, app_type, mobility),
            (layer.value, app_type, "*"),
            (layer.value, "*", "*"),
        ):
            if key in self.entries:
                return self.entries[key]
        if layer in self.defaults:
            return self.defaults[layer]
        raise PolicyGapError((layer.value, app_type, mobility))


DEFAULT_POLICY = PolicyTable()


def select_method(
    ho_type: HandoffType,
    app_type: str = "*",
    mobility: str = "*",
    policy: PolicyTable = DEFAULT_POLICY,
) -> str:
    """Choose the mechanism that will carry out a handoff of this type."""
    return policy.lookup(ho_type.layer, app_type, mobility)


@dataclass(frozen=True)
class ControllerConfig:
    hysteresis_delta: float = 0.5
    th_sup: float = 8.0
    th_inf: float = 2.0
    dwell_sp: int = 200
    prep_latency: int = 100
    exec_latency: int = 100
    eval_latency: int = 100
    strategy: Strategy = Strategy.REACTIVE
    app_timeout: int = 1000
    app_type: str = "*"
    mobility: str = "*"
    # Alternative opportunist reading: judge the candidate's utility against
    # th_sup instead of the serving network's.  Off by default.
    opportunist_on_target: bool = False
    success_regions: Mapping[str, GoalSpec] = field(default_factory=dict)
    policy: PolicyTable = DEFAULT_POLICY


def sufficiently_better(uf_target: float, uf_curr: float, delta: float) -> bool:
    """Hysteresis gate: the target must clear the serving utility by delta."""
    return uf_target > uf_curr + delta


@dataclass(frozen=True)
class DwellTracker:
    """Remembers when the sufficiently-better condition started holding."""

    since: Optional[int] = None


def consistently_better(
    tracker: DwellTracker, now: int, sp: int, suffb_now: bool
) -> tuple[DwellTracker, bool]:
    """Dwell gate: sufficiently-better must hold continuously for sp ms.

    Returns the updated tracker and the verdict.  The boundary is
    inclusive: a condition that started at t is consistent at t + sp.
    Any gap resets the clock; sp = 0 passes at the first holding instant.
    """
    if not suffb_now:
        return DwellTracker(since=None), False
    since = tracker.since if tracker.since is not None else now
    return DwellTracker(since=since), (now - since) >= sp


def handoff_reason(
    uf_curr: float,
    cfg: ControllerConfig,
    target_conb: bool,
    uf_target: Optional[float] = None,
) -> Optional[Reason]:
    """Why move at all?  Imperative flight from a failing link, or an
    opportunist grab while comfortable.  Either way the target must have
    proven itself (target_conb)."""
    if not target_conb:
        return None
    if uf_curr < cfg.th_inf:
        return Reason.IMPERATIVE
    judged = uf_target if (cfg.opportunist_on_target and uf_target is not None) else uf_curr
    if judged > cfg.th_sup:
        return Reason.OPPORTUNIST
    return None


Series = Sequence[tuple[int, float]]


def should_enter_preparation(
    curr_series: Series, target_series: Series, cfg: ControllerConfig, now: int
) -> bool:
    """Decide whether a candidate deserves preparation.

    Reactive: the candidate's latest score already beats the serving one.
    Proactive: also true when a straight line through the last two samples
    of each series predicts the candidate overtaking within prep_latency
    ms.  Prediction with fewer than two samples in either series raises
    InsufficientSamplesError.
    """
    if not curr_series or not target_series:
        raise ValueError("both series must be nonempty")
    t_curr, d_curr = curr_series[-1]
    t_tgt, d_tgt = target_series[-1]
    if d_tgt > d_curr:
        return True
    if cfg.strategy is Strategy.REACTIVE:
        return False
    if len(curr_series) < 2 or len(target_series) < 2:
        raise InsufficientSamplesError(
            "proactive prediction needs two samples per series"
        )
    slope_curr = _slope(curr_series[-2], curr_series[-1])
    slope_tgt = _slope(target_series[-2], target_series[-1])
    closing = slope_tgt - slope_curr
    if closing <= 0.0:
        return False
    gap = d_curr - d_tgt
    t_cross = now + gap / closing
    return t_cross <= now + cfg.prep_latency


def _slope(p0: tuple[int, float], p1: tuple[int, float]) -> float:
    (t0, v0), (t1, v1) = p0, p1
    if t1 == t0:
        return 0.0
    return (v1 - v0) / (t1 - t0)


@dataclass(frozen=True)
class TriggerPlan:
    """A fully decided handoff: why, where, how, who, and when."""

    why: Reason
    where: str
    how: str
    who: str
    when: int


@dataclass(frozen=True)
class MeasurementSet:
    network: str
    values: Mapping[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class EvalOutcome:
    accepted: bool
    reasons: tuple[str, ...] = ()


def evaluate(
    pre: MeasurementSet,
    post: MeasurementSet,
    anl: Optional[AvailableNetworkList],
    regions: Mapping[str, GoalSpec],
) -> EvalOutcome:
    """Grade a finished handoff.

    Accepted when the terminal landed on the head of the current list and
    every configured objective measure sits inside its region.  A region
    configured over a measure the set does not carry counts as a
    violation rather than passing silently.
    """
    reasons = []
    head = best(anl) if anl is not None else None
    if head != post.network:
        reasons.append("NotBest")
    for metric_id in sorted(regions):
        value = post.values.get(metric_id)
        if value is None or not goal_holds(value, regions[metric_id]):
            reasons.append(metric_id)
    if reasons:
        return EvalOutcome(accepted=False, reasons=tuple(reasons))
    return EvalOutcome(accepted=True)


@dataclass(frozen=True)
class HandoffRecord:
    """Everything known about one completed handoff attempt."""

    terminal: str
    from_net: str
    to_net: str
    reason: Reason
    ho_type: str
    method: str
    t_prep: int
    t_trigger: int
    t_switch_done: int
    t_eval_done: int
    uf_old: float
    uf_new: float
    accepted: bool
    reject_reasons: tuple[str, ...] = ()

    @property
    def dvho_ms(self) -> int:
        # Total vertical-handoff span: first preparation to evaluation done.
        return self.t_eval_done - self.t_prep


# ---------------------------------------------------------------------------
# Events


@dataclass(frozen=True)
class AnlUpdated:
    anl: AvailableNetworkList
    infos: Mapping[str, Attachment] = field(default_factory=dict)


@dataclass(frozen=True)
class CurrentLinkLost:
    pass


@dataclass(frozen=True)
class SwitchComplete:
    pass


@dataclass(frozen=True)
class TimerFired:
    kind: str  # "eval"
    at: int


Event = Union[AnlUpdated, CurrentLinkLost, SwitchComplete, TimerFired]


# ---------------------------------------------------------------------------
# Actions


@dataclass(frozen=True)
class Connect:
    network: str


@dataclass(frozen=True)
class StartSwitch:
    plan: TriggerPlan


@dataclass(frozen=True)
class ScheduleTimer:
    kind: str  # "switch" | "eval"
    at: int


@dataclass(frozen=True)
class RecordHandoff:
    record: HandoffRecord


Action = Union[Connect, StartSwitch, ScheduleTimer, RecordHandoff]


# ---------------------------------------------------------------------------
# Controller state


@dataclass(frozen=True)
class PrepData:
    target: str
    entered_at: int
    dwell: DwellTracker = DwellTracker()
    last_reason: Optional[Reason] = None


@dataclass(frozen=True)
class InFlight:
    t_prep: int
    from_net: str
    uf_old: float
    ho_type: str
    t_switch_done: Optional[int] = None


@dataclass(frozen=True)
class ControllerState:
    terminal: str
    phase: Phase = Phase.DISCONNECTION
    current: Optional[str] = None
    prep: Optional[PrepData] = None
    plan: Optional[TriggerPlan] = None
    flight: Optional[InFlight] = None
    switch_deadline: Optional[int] = None
    eval_deadline: Optional[int] = None
    # Recent score samples per network, oldest first, at most two each.
    samples: tuple[tuple[str, tuple[tuple[int, float], ...]], ...] = ()
    last_anl: Optional[AvailableNetworkList] = None


def initial_state(terminal: str) -> ControllerState:
    return ControllerState(terminal=terminal)


def _samples_for(state: ControllerState, net: str) -> tuple[tuple[int, float], ...]:
    for nid, series in state.samples:
        if nid == net:
            return series
    return ()


def _latest(state: ControllerState, net: str) -> Optional[float]:
    series = _samples_for(state, net)
    return series[-1][1] if series else None


def _update_samples(state: ControllerState, anl: AvailableNetworkList, now: int):
    keep = set(anl.network_ids)
    if state.current is not None:
        keep.add(state.current)
    merged = {}
    for nid, series in state.samples:
        if nid in keep:
            merged[nid] = series
    for nid, score in anl.entries:
        series = merged.get(nid, ())
        merged[nid] = (series + ((now, score.value),))[-2:]
    return tuple(sorted(merged.items()))


def _candidate(anl: AvailableNetworkList, current: str) -> Optional[str]:
    # Best-ranked network other than the serving one.
    for nid, _ in anl.entries:
        if nid != current:
            return nid
    return None


def _entry_holds(state: ControllerState, candidate: str, cfg: ControllerConfig, now: int) -> bool:
    curr_series = _samples_for(state, state.current)
    tgt_series = _samples_for(state, candidate)
    if not curr_series or not tgt_series:
        return False
    try:
        return should_enter_preparation(curr_series, tgt_series, cfg, now)
    except InsufficientSamplesError:
        # Cannot predict yet; fall back to the plain crossing test.
        return tgt_series[-1][1] > curr_series[-1][1]


def step(
    state: ControllerState, event: Event, cfg: ControllerConfig, now: int
) -> tuple[ControllerState, tuple[Action, ...]]:
    """Advance the machine by one event.

    Pure: no hidden state, no clock reads.  Undefined (phase, event) pairs
    raise IllegalEventError; stale evaluation timers are ignored.
    """
    if isinstance(event, AnlUpdated):
        return _on_anl(state, event, cfg, now)
    if isinstance(event, CurrentLinkLost):
        return _on_link_lost(state, cfg, now)
    if isinstance(event, SwitchComplete):
        return _on_switch_complete(state, cfg, now)
    if isinstance(event, TimerFired):
        return _on_timer(state, event, cfg, now)
    raise IllegalEventError(state.phase, event)


def _on_anl(state, event, cfg, now):
    anl = event.anl
    st = replace(state, samples=_update_samples(state, anl, now), last_anl=anl)

    if st.phase is Phase.DISCONNECTION:
        head = best(anl)
        if head is None:
            return st, ()
        st = replace(st, phase=Phase.INITIATION, current=head)
        return st, (Connect(head),)

    if st.phase in (Phase.EXECUTION, Phase.EVALUATION):
        # Committed; keep absorbing context for the eventual evaluation.
        return st, ()

    # Initiation or Preparation: the serving network must still be listed.
    if anl.score_of(st.current) is None:
        return replace(st, phase=Phase.DISCONNECTION, current=None, prep=None), ()

    cand = _candidate(anl, st.current)

    if st.phase is Phase.INITIATION:
        if cand is None or not _entry_holds(st, cand, cfg, now):
            return st, ()
        prep = PrepData(target=cand, entered_at=now)
        st = replace(st, phase=Phase.PREPARATION, prep=prep)
        return _prep_update(st, event, cfg, now)

    # Preparation.
    if cand is None or not _entry_holds(st, cand, cfg, now):
        # The serving network is the best choice again: roll back.
        return replace(st, phase=Phase.INITIATION, prep=None), ()
    if cand != st.prep.target:
        # Retargeting restarts the dwell clock.
        st = replace(st, prep=PrepData(target=cand, entered_at=st.prep.entered_at))
    return _prep_update(st, event, cfg, now)


def _prep_update(st, event, cfg, now):
    prep = st.prep
    d_curr = _latest(st, st.current)
    d_tgt = _latest(st, prep.target)
    suffb = sufficiently_better(d_tgt, d_curr, cfg.hysteresis_delta)
    dwell, conb = consistently_better(prep.dwell, now, cfg.dwell_sp, suffb)
    reason = handoff_reason(d_curr, cfg, suffb and conb, uf_target=d_tgt)
    st = replace(st, prep=replace(prep, dwell=dwell, last_reason=reason))
    if reason is None:
        return st, ()

    # All gates passed: commit the plan and start switching.
    ho_type = classify(event.infos[st.current], event.infos[prep.target])
    method = select_method(ho_type, cfg.app_type, cfg.mobility, cfg.policy)
    plan = TriggerPlan(
        why=reason,
        where=prep.target,
        how=method,
        who=f"hce:{st.terminal}",
        when=now,
    )
    flight = InFlight(
        t_prep=prep.entered_at,
        from_net=st.current,
        uf_old=d_curr,
        ho_type=ho_type.code,
    )
    st = replace(
        st,
        phase=Phase.EXECUTION,
        current=None,
        prep=None,
        plan=plan,
        flight=flight,
        switch_deadline=now + cfg.exec_latency,
    )
    return st, (StartSwitch(plan), ScheduleTimer("switch", now + cfg.exec_latency))


def _on_link_lost(state, cfg, now):
    if state.phase in (Phase.INITIATION, Phase.PREPARATION):
        return (
            replace(state, phase=Phase.DISCONNECTION, current=None, prep=None),
            (),
        )
    if state.phase is Phase.EVALUATION:
        # The new link died under evaluation: record the failure at once.
        record = _build_record(state, now, EvalOutcome(False, ("LinkLost",)))
        st = replace(
            state,
            phase=Phase.DISCONNECTION,
            current=None,
            plan=None,
            flight=None,
            eval_deadline=None,
        )
        return st, (RecordHandoff(record),)
    raise IllegalEventError(state.phase, CurrentLinkLost())


def _on_switch_complete(state, cfg, now):
    if state.phase is not Phase.EXECUTION:
        raise IllegalEventError(state.phase, SwitchComplete())
    target = state.plan.where
    st = replace(
        state,
        phase=Phase.EVALUATION,
        current=target,
        flight=replace(state.flight, t_switch_done=now),
        switch_deadline=None,
        eval_deadline=now + cfg.eval_latency,
    )
    return st, (Connect(target), ScheduleTimer("eval", now + cfg.eval_latency))


def _on_timer(state, event, cfg, now):
    if event.kind != "eval":
        raise IllegalEventError(state.phase, event)
    if state.phase is not Phase.EVALUATION or event.at != state.eval_deadline:
        # A timer armed for an evaluation that already ended; drop it.
        return state, ()
    outcome = evaluate(
        pre=MeasurementSet(network=state.flight.from_net, values={"UF": state.flight.uf_old}),
        post=_post_measurements(state, now),
        anl=state.last_anl,
        regions=cfg.success_regions,
    )
    record = _build_record(state, now, outcome)
    st = replace(
        state,
        phase=Phase.INITIATION,
        plan=None,
        flight=None,
        eval_deadline=None,
    )
    return st, (RecordHandoff(record),)


def _uf_new(state) -> float:
    value = state.last_anl.score_of(state.current) if state.last_anl else None
    if value is None:
        value = _latest(state, state.current)
    if value is None:
        value = state.flight.uf_old
    return value


def _post_measurements(state, now) -> MeasurementSet:
    flight = state.flight
    uf_new = _uf_new(state)
    values = {
        "UF": uf_new,
        "IL": float(flight.t_switch_done - state.plan.when),
        "DLat": float(state.plan.when - flight.t_prep),
        "ExLat": float(flight.t_switch_done - state.plan.when),
        "EvLat": float(now - flight.t_switch_done),
        "HOL": float(now - flight.t_prep),
    }
    if flight.uf_old != 0.0:
        values["ImpR"] = uf_new / flight.uf_old
    return MeasurementSet(network=state.current, values=values)


def _build_record(state, now, outcome: EvalOutcome) -> HandoffRecord:
    flight = state.flight
    plan = state.plan
    return HandoffRecord(
        terminal=state.terminal,
        from_net=flight.from_net,
        to_net=plan.where,
        reason=plan.why,
        ho_type=flight.ho_type,
        method=plan.how,
        t_prep=flight.t_prep,
        t_trigger=plan.when,
        t_switch_done=flight.t_switch_done,
        t_eval_done=now,
        uf_old=flight.uf_old,
        uf_new=_uf_new(state),
        accepted=outcome.accepted,
        reject_reasons=outcome.reasons,
    )
