"""Exception types shared across the package."""

from __future__ import annotations


class HandoffSimError(Exception):
    """Base class for all package errors."""


class UnknownCriterionError(HandoffSimError):
    def __init__(self, criterion_id: str):
        self.criterion_id = criterion_id
        super().__init__(f"unknown criterion id: {criterion_id!r}")


class NonFiniteValueError(HandoffSimError):
    def __init__(self, criterion_id: str, value: float):
        self.criterion_id = criterion_id
        self.value = value
        super().__init__(f"non-finite value for criterion {criterion_id!r}: {value!r}")


class MissingCriterionError(HandoffSimError):
    def __init__(self, criterion_id: str):
        self.criterion_id = criterion_id
        super().__init__(f"weighted criterion missing from vector: {criterion_id!r}")


class DuplicateNetworkError(HandoffSimError):
    def __init__(self, network_id: str):
        self.network_id = network_id
        super().__init__(f"duplicate network id in ranking input: {network_id!r}")


class WeightProfileError(HandoffSimError):
    """Weight profile violates its constraints (range, side sums, unknown ids)."""


class UnknownTopologyElementError(HandoffSimError):
    def __init__(self, kind: str, element_id: str):
        self.kind = kind
        self.element_id = element_id
        super().__init__(f"unknown {kind} id: {element_id!r}")


class EmptyDimensionError(HandoffSimError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"scenario dimension {index} has zero alternatives")


class IllegalEventError(HandoffSimError):
    def __init__(self, phase, event):
        self.phase = phase
        self.event = event
        super().__init__(f"event {event!r} is not defined in phase {phase!r}")


class InsufficientSamplesError(HandoffSimError):
    """Proactive prediction needs at least two samples per series."""


class PolicyGapError(HandoffSimError):
    def __init__(self, key):
        self.key = key
        super().__init__(f"policy table has no entry for {key!r}")


class UnknownMetricError(HandoffSimError):
    def __init__(self, metric_id: str):
        self.metric_id = metric_id
        super().__init__(f"metric {metric_id!r} is not present in the snapshot")


class MalformedTraceError(HandoffSimError):
    """Trace input is not parseable as line-delimited JSON records."""


class ScenarioError(HandoffSimError):
    """Scenario document fails schema or invariant validation.

    ``problems`` holds one human-readable diagnostic per violation, each
    anchored to the offending field path (or input line for parse errors).
    """

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
