"""Handoff classification.

An attachment names everything a connection touches: the terminal, the
provider, the IP network, the cell (base station), the radio channel, and
the access technology.  Comparing two attachments yields the set of levels
that changed; the classification reports the highest changed infrastructure
level together with whether the user terminal itself changed.

Two binary facts span the space: terminal changed or not, and one of eight
infrastructure outcomes (no change, channel, cell, network, or provider,
the last three split into homogeneous and heterogeneous by technology).
That grid holds 16 combinations; the one where nothing changes at all is
not a handoff, leaving 15 feasible handoff types.

Verticality is only meaningful where distinct radio technologies can meet:
cell, network, and provider level changes are vertical when the technology
changed and horizontal when it did not.  Channel-level changes and pure
terminal changes carry no verticality.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Optional, Sequence

from .errors import EmptyDimensionError


class InfraLevel(Enum):
    NONE = "none"
    CHANNEL = "channel"
    CELL = "cell"
    NET = "net"
    PROVIDER = "provider"


class Verticality(Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"
    NOT_APPLICABLE = "n/a"


class Layer(Enum):
    L1 = "L1"
    L2 = "L2"
    L3 = "L3"
    L4_7 = "L4-7"


@dataclass(frozen=True)
class Attachment:
    """A point of attachment, fully qualified."""

    terminal_id: str
    provider_id: str
    net_id: str
    cell_id: str
    channel_id: str
    technology: str


@dataclass(frozen=True)
class TransitionDelta:
    terminal_changed: bool
    channel_changed: bool
    cell_changed: bool
    net_changed: bool
    provider_changed: bool
    tech_changed: bool


@dataclass(frozen=True)
class HandoffType:
    code: str
    terminal_changed: bool
    infra_level: InfraLevel
    verticality: Verticality
    layer: Layer


NOT_A_HANDOFF = None  # classify() returns None for the identity transition


def delta(before: Attachment, after: Attachment) -> TransitionDelta:
    return TransitionDelta(
        terminal_changed=before.terminal_id != after.terminal_id,
        channel_changed=before.channel_id != after.channel_id,
        cell_changed=before.cell_id != after.cell_id,
        net_changed=before.net_id != after.net_id,
        provider_changed=before.provider_id != after.provider_id,
        tech_changed=before.technology != after.technology,
    )


def _infra_level(d: TransitionDelta) -> InfraLevel:
    # Report the highest level that changed; changing a provider implies
    # new net, cell, and channel underneath it.
    if d.provider_changed:
        return InfraLevel.PROVIDER
    if d.net_changed:
        return InfraLevel.NET
    if d.cell_changed:
        return InfraLevel.CELL
    if d.channel_changed:
        return InfraLevel.CHANNEL
    return InfraLevel.NONE


def _verticality(level: InfraLevel, tech_changed: bool) -> Verticality:
    if level in (InfraLevel.CELL, InfraLevel.NET, InfraLevel.PROVIDER):
        return Verticality.VERTICAL if tech_changed else Verticality.HORIZONTAL
    return Verticality.NOT_APPLICABLE


def _layer(terminal_changed: bool, level: InfraLevel) -> Layer:
    # Terminal and provider changes need session-level support; below
    # that the layer follows the infrastructure level.
    if terminal_changed or level is InfraLevel.PROVIDER:
        return Layer.L4_7
    if level is InfraLevel.NET:
        return Layer.L3
    if level is InfraLevel.CELL:
        return Layer.L2
    return Layer.L1  # CHANNEL; (terminal same, NONE) never reaches here


def _code(terminal_changed: bool, level: InfraLevel, vert: Verticality) -> str:
    parts = []
    if terminal_changed:
        parts.append("terminal")
    if level is InfraLevel.NONE:
        pass
    elif level is InfraLevel.CHANNEL:
        parts.append("channel")
    else:
        suffix = {Verticality.HORIZONTAL: "horizontal", Verticality.VERTICAL: "vertical"}[vert]
        parts.append(f"{level.value}_{suffix}")
    return "+".join(parts)


def _make_type(terminal_changed: bool, level: InfraLevel, tech_changed: bool) -> HandoffType:
    vert = _verticality(level, tech_changed)
    return HandoffType(
        code=_code(terminal_changed, level, vert),
        terminal_changed=terminal_changed,
        infra_level=level,
        verticality=vert,
        layer=_layer(terminal_changed, level),
    )


# The eight infrastructure outcomes, in ranking order.
_INFRA_OUTCOMES: tuple[tuple[InfraLevel, bool], ...] = (
    (InfraLevel.NONE, False),
    (InfraLevel.CHANNEL, False),
    (InfraLevel.CELL, False),
    (InfraLevel.CELL, True),
    (InfraLevel.NET, False),
    (InfraLevel.NET, True),
    (InfraLevel.PROVIDER, False),
    (InfraLevel.PROVIDER, True),
)


def enumerate_types() -> list[HandoffType]:
    """All feasible handoff types, in a stable order.

    The grid is 2 terminal outcomes x 8 infrastructure outcomes; the
    combination where neither side changes is the identity and is
    excluded, leaving 15 entries.
    """
    types = []
    for terminal_changed, (level, tech) in product((False, True), _INFRA_OUTCOMES):
        if not terminal_changed and level is InfraLevel.NONE:
            continue  # nothing moved: not a handoff
        types.append(_make_type(terminal_changed, level, tech))
    return types


def classify(
    before: Attachment,
    after: Attachment,
    topology=None,
) -> Optional[HandoffType]:
    """Classify the transition between two attachments.

    Returns None for the identity transition (same terminal, same
    attachment point).  When a topology is supplied, both attachments are
    validated against it first.
    """
    if topology is not None:
        topology.validate_attachment(before)
        topology.validate_attachment(after)
    d = delta(before, after)
    level = _infra_level(d)
    if not d.terminal_changed and level is InfraLevel.NONE:
        return NOT_A_HANDOFF
    tech = d.tech_changed if level in (InfraLevel.CELL, InfraLevel.NET, InfraLevel.PROVIDER) else False
    return _make_type(d.terminal_changed, level, tech)


def scenario_space_size(dimensions: Sequence[int]) -> int:
    """Number of combinations over independent scenario dimensions."""
    size = 1
    for i, n in enumerate(dimensions):
        if n == 0:
            raise EmptyDimensionError(i)
        size *= n
    return size
