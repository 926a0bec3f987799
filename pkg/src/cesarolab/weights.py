"""Köthe weight families held as ``log a_n(i)``, the built-in gallery, and weighted sup-norms."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from . import weightlang as wl
from .xreal import XArray

STATUSES = ("holds", "fails", "unknown")


class GalleryError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class WeightFamily:
    """A Köthe matrix ``A = (a_n(i))`` given through ``logA(n, i)``.

    Indices ``i`` are user-facing and start at 1; ``index_offset`` only shifts
    the point where the formula is evaluated.  ``v_n(i) = 1/a_n(i)`` so
    ``logV = -logA``.
    """

    name: str
    expr: wl.Node
    source: str = ""
    index_offset: int = 0
    params: Mapping[str, float] = field(default_factory=dict)
    sequences: Mapping[str, object] = field(default_factory=dict)
    declared: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        missing = wl.parameters(self.expr) - set(self.params)
        if missing:
            raise GalleryError(f"family {self.name!r}: unbound parameters {sorted(missing)}")
        for key, status in self.declared.items():
            if status not in STATUSES:
                raise GalleryError(f"declared verdict {key!r} has status {status!r}")
        object.__setattr__(self, "_cache", {})

    # evaluation -------------------------------------------------------
    def log_a_x(self, n: int, i) -> XArray:
        """``log a_n(i)`` as an extended-range array; ``i`` may be an XArray."""
        if isinstance(i, XArray):
            ix = i + float(self.index_offset) if self.index_offset else i
        else:
            ix = np.asarray(i, dtype=float) + self.index_offset
        return wl.evaluate_x(self.expr, ix, n, self.params, self.sequences)

    def log_a_range(self, n: int, i_max: int) -> XArray:
        """``log a_n(i)`` for ``i = 1..i_max`` (cached, extended by prefix reuse)."""
        cache = self._cache
        hit = cache.get(n)
        if hit is None or len(hit) < i_max:
            hit = self.log_a_x(n, np.arange(1, i_max + 1, dtype=float))
            cache[n] = hit
        return hit[:i_max]

    def logA(self, n: int, i: int) -> float:
        return float(self.log_a_x(n, [float(i)]).to_float()[0])

    def logV(self, n: int, i: int) -> float:
        return -self.logA(n, i)

    def describe(self) -> dict:
        return {"name": self.name, "logA": self.source or wl.pretty(self.expr),
                "offset": self.index_offset, "params": dict(self.params),
                "declared": dict(self.declared)}


def make_family(name: str, source: str, *, offset: int = 0, params=None, sequences=None,
                declared=None) -> WeightFamily:
    params = dict(params or {})
    sequences = dict(sequences or {})
    expr = wl.parse(source, params=list(params), sequences=list(sequences))
    return WeightFamily(name=name, expr=expr, source=source, index_offset=int(offset),
                        params=params, sequences=sequences, declared=dict(declared or {}))


def load_definition(path) -> WeightFamily:
    """Read a JSON definition ``{name, logA, offset, params, sequences, declared}``."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict) or "logA" not in data:
        raise GalleryError(f"{path}: definition needs at least a 'logA' formula")
    offset = data.get("offset", 0)
    if not isinstance(offset, int) or offset < 0:
        raise GalleryError(f"{path}: offset must be a non-negative integer")
    sequences = {k: [float(x) for x in v] for k, v in data.get("sequences", {}).items()}
    return make_family(data.get("name", Path(path).stem), data["logA"], offset=offset,
                       params={k: float(v) for k, v in data.get("params", {}).items()},
                       sequences=sequences, declared=data.get("declared", {}))


# ------------------------------------------------------------------ gallery

def _pe(s):
    return f"PointEigen({s})"


def _example_15(params):
    return make_family("example-1.5", "i*n*exp(i*n)", declared={
        "Ginf": "holds", "Schwartz": "holds", "nuclear": "holds", "DN": "holds",
        "U": "holds", "CesContinuity": "holds", "DContinuity": "holds",
        "DragilevTau(2)": "holds"})


def _remark_39(params):
    return make_family("remark-3.9", "i*n", declared={
        "Ginf": "holds", "nuclear": "holds", "U": "fails"})


def _example_34i(params):
    alpha = float(params.get("alpha", 0.5))
    if not 0.0 < alpha < 1.0:
        raise GalleryError("example-3.4i: alpha must lie in (0, 1)")
    declared = {"Ginf2": "fails", "N": "fails"}
    declared.update({_pe(s): "holds" for s in range(1, 7)})
    return make_family("example-3.4i", "alpha*n/(n+1)*log(i) + i", params={"alpha": alpha},
                       declared=declared)


def _example_34ii(params):
    if "s" not in params:
        raise GalleryError("example-3.4ii: parameter s (integer >= 1) is required")
    s = params["s"]
    if float(s) != int(float(s)) or int(float(s)) < 1:
        raise GalleryError(f"example-3.4ii: s must be an integer >= 1, got {s!r}")
    s = int(float(s))
    declared = {"Ginf": "fails", _pe(s): "fails"}
    declared.update({_pe(k): "holds" for k in range(1, s)})
    return make_family("example-3.4ii", "(s - 1/(1+n))*log(i)", params={"s": float(s)},
                       declared=declared)


_LOGLOG_OFFSET = 26


def _remark_44(params):
    return make_family("remark-4.4", "n*loglog(i)", offset=_LOGLOG_OFFSET, declared={
        "Ginf": "holds", "Schwartz": "holds", "nuclear": "fails", "L": "holds"})


def _power_series(params):
    alpha = params.get("alpha", "identity")
    if alpha not in wl.BUILTIN_SEQUENCES:
        raise GalleryError(f"power-series: alpha must be one of {wl.BUILTIN_SEQUENCES}")
    if alpha == "loglog":
        declared = {"Ginf": "holds", "Schwartz": "holds", "nuclear": "fails", "L": "holds"}
        offset = _LOGLOG_OFFSET
    else:
        declared = {"Ginf": "holds", "Schwartz": "holds", "nuclear": "holds"}
        offset = 0
    return make_family(f"power-series[{alpha}]", "n*alpha(i)", offset=offset,
                       sequences={"alpha": alpha}, declared=declared)


def _loglog_weights(params):
    return make_family("loglog-weights", "n*log(loglog(i))", offset=_LOGLOG_OFFSET, declared={
        "Ginf": "holds", "Schwartz": "holds", "nuclear": "fails", "L": "fails"})


def _g1_nuclear(params):
    return make_family("g1-nuclear", "-i/n", declared={
        "G1axioms": "holds", "CesContinuity": "fails"})


_GALLERY = {
    "example-1.5": (_example_15, "a_n(i) = exp(i n e^{i n}); nuclear, (DN), rapidly increasing"),
    "remark-3.9": (_remark_39, "a_n(i) = e^{i n}; nuclear but without condition (U)"),
    "example-3.4i": (_example_34i, "a_n(i) = i^{alpha_n} e^i; not G-infinity (param alpha)"),
    "example-3.4ii": (_example_34ii, "a_n(i) = i^{s - 1/(1+n)}; not G-infinity (param s)"),
    "remark-4.4": (_remark_44, "a_n(i) = (log i)^n; Schwartz, not nuclear, condition (L)"),
    "power-series": (_power_series, "a_n(i) = e^{n alpha_i}; alpha in identity/log/loglog"),
    "loglog-weights": (_loglog_weights, "a_n(i) = (log log i)^n; Schwartz, fails (L)"),
    "g1-nuclear": (_g1_nuclear, "a_n(i) = e^{-i/n}; finite type"),
}


def gallery_keys() -> list[str]:
    return list(_GALLERY)


def gallery_summary() -> list[tuple[str, str]]:
    return [(k, v[1]) for k, v in _GALLERY.items()]


def gallery(name: str, params: Mapping[str, object] | None = None, **kwargs) -> WeightFamily:
    """Look up a built-in family; parameters come from ``params`` or keywords."""
    if name not in _GALLERY:
        raise GalleryError(f"unknown gallery key {name!r}; known: {', '.join(_GALLERY)}")
    merged = dict(params or {})
    merged.update(kwargs)
    return _GALLERY[name][0](merged)


# -------------------------------------------------------------------- norms

def q_norm(family: WeightFamily, n: int, x) -> float:
    """``max_i v_n(i) |x_i|`` evaluated as ``max_i exp(log|x_i| - logA(n, i))``."""
    x = np.asarray(x)
    if x.ndim != 1 or len(x) < 1:
        raise ValueError("x must be a non-empty 1-d vector")
    mag = np.abs(x).astype(float)
    nz = mag > 0
    if not np.any(nz):
        return 0.0
    la = family.log_a_range(n, len(x))
    with np.errstate(divide="ignore"):
        terms = XArray.from_float(np.log(np.where(nz, mag, 1.0))) - la
    t = terms.to_float()
    t = np.where(nz, t, -np.inf)
    if np.any(np.isnan(t)):
        raise FloatingPointError("norm term could not be determined")
    top = float(np.max(t))
    return math.exp(top) if top < 709.0 else math.inf
