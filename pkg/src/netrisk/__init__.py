"""Probable-cost-of-failure risk engine for infrastructure networks.

Couples fragility curves (conditional failure probability given event
intensity) with annual hazard occurrence models and failure costs to
rank components, events and lines by their share of the expected annual
loss, and to answer what-if questions about mitigation measures.
"""

from .economics import CostModel, FailureCost, RecoveryFunction, indirect_cost, total_failure_cost
from .engine import (
    RemoveEvent,
    Retrofit,
    RiskCell,
    RiskReport,
    Scenario,
    SetBackPeriod,
    SetCost,
    WhatIfDelta,
    apply_scenario,
    evaluate,
    importance_factor,
    probable_cost,
    what_if_delta,
)
from .errors import UnsupportedTopologyError, ValidationError
from .fragility import (
    AnnualFailureProbability,
    FragilityCurve,
    Lognormal,
    Tabulated,
    combine_event_failure_probabilities,
    component_annual_failure_probability,
    fragility_eval,
)
from .hazard import (
    BackPeriod,
    ExceedanceCurve,
    HazardCurve,
    IntensityGrid,
    exceedance_to_occurrence,
    truncate_by_back_period,
)
from .model import AnalysisSettings, ModelDocument
from .model_io import (
    Diagnostic,
    LoadResult,
    emit_report,
    load_model,
    load_scenario,
    serialize_model,
)
from .network import (
    Component,
    Line,
    Network,
    connection_failure_probability,
    parallel_failure_probability,
    series_failure_probability,
)

__version__ = "0.1.0"
