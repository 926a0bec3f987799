"""Numerical laboratory for the Cesàro operator on co-echelon spaces of infinite type."""
from .criteria import Budget, ConditionId, TrendReport, Verdict, check, classify, detect_trend
from .weightlang import evaluate, parse, pretty
from .weights import WeightFamily, gallery, gallery_keys, load_definition, q_norm

__all__ = [
    "Budget", "ConditionId", "TrendReport", "Verdict", "check", "classify", "detect_trend",
    "evaluate", "parse", "pretty", "WeightFamily", "gallery", "gallery_keys",
    "load_definition", "q_norm",
]
__version__ = "0.1.0"
