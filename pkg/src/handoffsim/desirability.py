"""Multi-criteria desirability scoring and network ranking.

A network's desirability is a weighted sum of base-10 logarithms of its
criterion values: beneficial criteria add, detrimental criteria subtract.
Each weighted criterion contributes (K + W) * log10(value), where W is the
criterion's weight and K is a constant offset shared by all terms.  Values
at or below a criterion's floor are clamped up to the floor before the log
so the score stays finite.

Weights live in [0, 1] and each polarity side that has any weighted
criterion must sum to 1.  Criteria without a weight contribute nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .context import CriteriaVector, CriterionDef, Polarity, catalog_index
from .errors import (
    DuplicateNetworkError,
    MissingCriterionError,
    NonFiniteValueError,
    UnknownCriterionError,
    WeightProfileError,
)

SIDE_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class WeightProfile:
    """Per-criterion weights plus the shared additive constant K."""

    weights: Mapping[str, float]
    k: float = 1.0

    def validate(self, catalog: Sequence[CriterionDef]) -> None:
        """Raise WeightProfileError on any constraint violation."""
        index = catalog_index(catalog)
        if not math.isfinite(self.k) or self.k < 0:
            raise WeightProfileError(f"constant K must be finite and >= 0, got {self.k!r}")
        sums = {Polarity.BENEFICIAL: 0.0, Polarity.DETRIMENTAL: 0.0}
        counts = {Polarity.BENEFICIAL: 0, Polarity.DETRIMENTAL: 0}
        for cid, w in self.weights.items():
            if cid not in index:
                raise WeightProfileError(f"weight names unknown criterion {cid!r}")
            if not math.isfinite(w) or not (0.0 <= w <= 1.0):
                raise WeightProfileError(f"weight for {cid!r} outside [0, 1]: {w!r}")
            sums[index[cid].polarity] += w
            counts[index[cid].polarity] += 1
        for side, total in sums.items():
            if counts[side] and abs(total - 1.0) > SIDE_SUM_TOLERANCE:
                raise WeightProfileError(
                    f"{side.value} weights sum to {total!r}, expected 1.0"
                )


@dataclass(frozen=True)
class DesirabilityScore:
    network_id: str
    value: float
    computed_at: int = 0


def _clamped_log10(value: float, floor: float) -> float:
    return math.log10(max(value, floor))


def desirability(
    v: CriteriaVector,
    profile: WeightProfile,
    catalog: Sequence[CriterionDef],
    network_id: str = "",
) -> DesirabilityScore:
    """Score one network's criteria vector.

    Every weighted criterion must be present in the vector and finite.
    Criteria present in the vector but unweighted are ignored.
    """
    index = catalog_index(catalog)
    total = 0.0
    for cid in sorted(profile.weights):
        if cid not in index:
            raise UnknownCriterionError(cid)
        if cid not in v.values:
            raise MissingCriterionError(cid)
        raw = v.values[cid]
        if not math.isfinite(raw):
            raise NonFiniteValueError(cid, raw)
        cdef = index[cid]
        term = (profile.k + profile.weights[cid]) * _clamped_log10(raw, cdef.floor)
        if cdef.polarity is Polarity.BENEFICIAL:
            total += term
        else:
            total -= term
    return DesirabilityScore(network_id=network_id, value=total, computed_at=v.timestamp)


@dataclass(frozen=True)
class AvailableNetworkList:
    """Candidate networks ordered best first.

    ``entries`` pairs each network id with its score; order is descending
    desirability with ties broken by ascending network id.
    """

    entries: tuple[tuple[str, DesirabilityScore], ...] = ()
    as_of: int = 0

    @property
    def network_ids(self) -> tuple[str, ...]:
        return tuple(net for net, _ in self.entries)

    def score_of(self, network_id: str) -> Optional[float]:
        for net, score in self.entries:
            if net == network_id:
                return score.value
        return None


def rank(scores: Sequence[DesirabilityScore], as_of: int = 0) -> AvailableNetworkList:
    """Order scores into an available-network list, best first."""
    seen = set()
    for s in scores:
        if s.network_id in seen:
            raise DuplicateNetworkError(s.network_id)
        seen.add(s.network_id)
    ordered = sorted(scores, key=lambda s: (-s.value, s.network_id))
    return AvailableNetworkList(
        entries=tuple((s.network_id, s) for s in ordered),
        as_of=as_of,
    )


def best(anl: AvailableNetworkList) -> Optional[str]:
    """Head of the list, or None when no network is available."""
    if not anl.entries:
        return None
    return anl.entries[0][0]


def relative_desirability(anl: AvailableNetworkList, current_id: str) -> float:
    """Absolute score gap between the current network and the list head."""
    current = anl.score_of(current_id)
    if current is None:
        raise KeyError(f"network {current_id!r} not present in the list")
    head = anl.entries[0][1].value
    return abs(current - head)
