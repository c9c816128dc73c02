"""Graphs of finite groups: analysis, legal extensions and the
forall-exists equivalence test.

Reports come back as dicts; graphs are ``Graph`` objects loaded from GFG
files or text.
"""

import json

from ._vfg import (
    BudgetExceeded,
    Error,
    Graph,
    MalformedWord,
    ParseError,
    ValidationError,
    evaluate_finite as _evaluate_finite,
    symbol_count,
    verify_certificate,
    zeta,
)
from . import _vfg

__all__ = [
    "BudgetExceeded", "Error", "Graph", "MalformedWord", "ParseError", "ValidationError",
    "analyze", "cylinders", "decide", "evaluate_finite", "extensions", "isomorphic",
    "symbol_count", "validate", "verify_certificate", "word", "zeta",
]


def validate(graph):
    return json.loads(_vfg.validation_report(graph))


def analyze(graph):
    return json.loads(_vfg.analysis_report(graph))


def word(graph, text, start=-1):
    return json.loads(_vfg.word_report(graph, text, start))


def cylinders(graph):
    return json.loads(_vfg.cylinders_report(graph))


def extensions(graph, kind="all"):
    return json.loads(_vfg.extensions_report(graph, kind))


def isomorphic(first, second, budget=100000):
    """Returns (verdict, provenance) with verdict YES, NO or UNKNOWN."""
    return _vfg.isomorphic(first, second, budget)


def decide(first, second, depth=3, chain_budget=500, iso_budget=100000):
    """Returns (verdict, report, certificate); certificate is JSON text or None."""
    verdict, report, cert = _vfg.decide(first, second, depth, chain_budget, iso_budget)
    return verdict, json.loads(report), (cert or None)


def evaluate_finite(formula, group, given=None, budget=50000000):
    """group is a dict {degree, generators} or its JSON text."""
    if not isinstance(group, str):
        group = json.dumps(group)
    return _evaluate_finite(formula, group, given or {}, budget)
