"""In-memory representation of a complete analysis model.

A model bundles everything one evaluation needs: declared areas and
event types, hazard curves per (event type, area), fragility curves per
(component, event type), cost models, components, the line network, and
the analysis settings (back period and requested connection queries).

Instances are produced by the loader in :mod:`netrisk.model_io`, which
guarantees that every cross-reference resolves and that units agree.
Models are treated as immutable snapshots: scenario application builds
new instances and evaluation never mutates them, so they are safe to
share between concurrent requests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .economics import CostModel
from .fragility import FragilityCurve
from .hazard import ExceedanceCurve, HazardCurve
from .network import Component, Network

AnyHazard = HazardCurve | ExceedanceCurve


@dataclass(frozen=True)
class AnalysisSettings:
    back_period_years: float | None = None
    connection_queries: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class ModelDocument:
    name: str
    currency_label: str
    version: str
    areas: tuple[str, ...]
    event_types: tuple[str, ...]
    hazards: dict[tuple[str, str], AnyHazard] = field(default_factory=dict)
    fragilities: dict[tuple[str, str], FragilityCurve] = field(default_factory=dict)
    cost_models: dict[str, CostModel] = field(default_factory=dict)
    components: dict[str, Component] = field(default_factory=dict)
    network: Network = field(default_factory=lambda: Network(frozenset(), ()))
    analysis: AnalysisSettings = field(default_factory=AnalysisSettings)

    def component_event_pairs(self) -> list[tuple[str, str]]:
        """Sorted (component, event type) pairs that have a fragility curve."""
        return sorted(self.fragilities)
