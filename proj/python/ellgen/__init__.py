"""Equivariant elliptic genera by fixed-point localization."""

import json

from ._ellgen import (
    DegreeOutOfRange,
    Error,
    InconsistentAnomaly,
    InvalidDataset,
    MissingTableEntry,
    NearPole,
    ParseError,
    UnknownEntry,
    ZeroWeightNormalBundle,
    borel_weil_character,
    catalog_names,
    operator_names,
    run_cli,
    theta,
)
from . import _ellgen


def catalog(name):
    """Dataset document of a built-in entry as a dict."""
    return json.loads(_ellgen.catalog_json(name))


def _source(dataset):
    return dataset if isinstance(dataset, str) else json.dumps(dataset)


def validate(dataset):
    return _ellgen.validate(_source(dataset))


def anomaly_index(dataset):
    return _ellgen.anomaly_index(_source(dataset))


def rigid(dataset, operator, order=16):
    return _ellgen.rigid(_source(dataset), operator, order)


def count_zeros(dataset, operator, tau=0.5 + 1.2j):
    return _ellgen.count_zeros(_source(dataset), operator, tau)


def expand(dataset, operator, order=16):
    """Equivariant character report; dataset is a catalog name, JSON text or dict."""
    return json.loads(_ellgen.expand_json(_source(dataset), operator, order))


__all__ = [
    "DegreeOutOfRange",
    "Error",
    "InconsistentAnomaly",
    "InvalidDataset",
    "MissingTableEntry",
    "NearPole",
    "ParseError",
    "UnknownEntry",
    "ZeroWeightNormalBundle",
    "anomaly_index",
    "borel_weil_character",
    "catalog",
    "catalog_names",
    "count_zeros",
    "expand",
    "operator_names",
    "rigid",
    "run_cli",
    "theta",
    "validate",
]
