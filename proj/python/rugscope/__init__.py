"""Rug-pull detection for NFT projects."""

import json

from ._rugscope import (
    Error,
    GeneratedProject,
    Model,
    ParseError,
    Scenario,
    Timeline,
    build_dataset,
    determine_t_rp,
    drawdowns,
    feature_names,
    featurize,
    generate,
    levenshtein_ratio,
    load_model,
    load_timelines,
    monitor_replay,
    train,
)
from . import _rugscope

__version__ = "0.1.0"


def detect(timeline, asof, **thresholds):
    """Detection report as a dict; thresholds as in detect_json."""
    return json.loads(_rugscope.detect_json(timeline, asof, **thresholds))


def analyze_tricks(timeline, reference_names=(), wash_threshold=10):
    return json.loads(_rugscope.tricks_json(timeline, list(reference_names), wash_threshold))


__all__ = [
    "Error",
    "GeneratedProject",
    "Model",
    "ParseError",
    "Scenario",
    "Timeline",
    "analyze_tricks",
    "build_dataset",
    "detect",
    "determine_t_rp",
    "drawdowns",
    "feature_names",
    "featurize",
    "generate",
    "levenshtein_ratio",
    "load_model",
    "load_timelines",
    "monitor_replay",
    "train",
]
