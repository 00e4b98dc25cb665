"""Constrained k-edge switching: uniform sampling of graphs that share a
degree sequence and an arbitrary extra constraint."""

from .constraints import (
    AllOf,
    ColoredTriangles,
    ComponentSizes,
    Constraint,
    DegreeCorrelation,
    EdgeDelta,
    NoConstraint,
    ProjectionDegrees,
    TriangleCount,
)
from .engine import (
    RejectReason,
    SwitchProposal,
    TrialOutcome,
    WalkConfig,
    WalkReport,
    Walker,
    propose,
    run_walk,
    try_switch,
    validate,
)
from .graph import Graph, degree_sequences, read_edge_list
from .harness import ExperimentConfig, SummaryTable, emit_summary, run_experiment
from .observables import Observable, ObservableTrace, parse_observables, plateau_detect

__version__ = "0.1.0"

__all__ = [
    "AllOf", "ColoredTriangles", "ComponentSizes", "Constraint", "DegreeCorrelation", "EdgeDelta",
    "NoConstraint", "ProjectionDegrees", "TriangleCount",
    "RejectReason", "SwitchProposal", "TrialOutcome", "WalkConfig", "WalkReport", "Walker",
    "propose", "run_walk", "try_switch", "validate",
    "Graph", "degree_sequences", "read_edge_list",
    "ExperimentConfig", "SummaryTable", "emit_summary", "run_experiment",
    "Observable", "ObservableTrace", "parse_observables", "plateau_detect",
]
