"""Finite-budget numerical checks of asymptotic weight conditions.

Every condition is reduced to a sequence ``q(i)`` whose boundedness, decay to
zero or divergence decides it.  Sequences are handled as ``log q(i)`` and
summarised on dyadic blocks by :func:`classify_log_blocks`.  Pointwise
conditions are additionally probed on a far ladder ``i = 2**(2**t)``
(``t = 4..40``) in extended range, which resolves rates such as powers of
``log log i`` that are invisible below ``i = 2**14``.  Sum conditions use a
twice-condensed tail test on the same ladder.

All verdicts are numerical evidence at a finite budget, never proofs.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .weights import WeightFamily
from .xreal import XArray, cancellation_guard, cum_logsumexp

EPS = 0.05
DELTA = math.log1p(EPS)
TAU_ZERO = 1e-8
LOG_TAU_ZERO = math.log(TAU_ZERO)
LADDER_T = tuple(range(4, 41))
LADDER_MIN_POINTS = 6
GUARD_REL = 1e-9
DRAGILEV_X = tuple(2.0 ** k for k in range(4, 21))

HOLDS = "HoldsNumerically"
FAILS = "FailsNumerically"
INCONCLUSIVE = "Inconclusive"

ZERO = "ConvergesToZero"
CONVERGES = "ConvergesTo"
BOUNDED = "BoundedAbove"
DIVERGES = "Diverges"
UNKNOWN = "Inconclusive"
_BOUNDED_KINDS = (ZERO, CONVERGES, BOUNDED)


class BudgetError(ValueError):
    pass


# ------------------------------------------------------------------ budget

@dataclass(frozen=True)
class Budget:
    I_max: int = 2 ** 14
    N_max: int = 4
    M_max: int = 8

    def __post_init__(self):
        if self.I_max < 64 or self.I_max & (self.I_max - 1):
            raise BudgetError(f"I_max must be a power of two >= 64, got {self.I_max}")
        if self.I_max > 2 ** 22:
            raise BudgetError(f"I_max is capped at 2**22, got {self.I_max}")
        if self.N_max < 2:
            raise BudgetError(f"N_max must be >= 2, got {self.N_max}")
        if self.M_max < 8:
            raise BudgetError(f"M_max must be >= 8, got {self.M_max}")

    def as_dict(self):
        return {"I_max": self.I_max, "N_max": self.N_max, "M_max": self.M_max}


# ------------------------------------------------------------------- trend

@dataclass(frozen=True)
class TrendReport:
    """Dyadic-block summary of a positive sequence, kept in log form.

    ``blocks`` holds ``(upper index, log of block maximum)`` and ``minima`` the
    matching log block minima.  On the far ladder the index column holds
    ``log i`` instead (``axis == "log_i"``).  ``value`` is the limit for
    ``ConvergesTo`` and the bound for ``BoundedAbove``.
    """

    blocks: tuple
    minima: tuple
    classification: str
    value: float | None = None
    axis: str = "i"

    @property
    def bounded(self) -> bool:
        return self.classification in _BOUNDED_KINDS

    @property
    def sup(self) -> float:
        top = max((b for _, b in self.blocks), default=-math.inf)
        return _exp(top)

    def to_dict(self):
        d = {"classification": self.classification, "axis": self.axis,
             "blocks": [[_num(i), _exp_json(b)] for i, b in self.blocks],
             "log_blocks": [[_num(i), _num(b)] for i, b in self.blocks]}
        if self.value is not None:
            d["value"] = _num(self.value)
        return d


def _exp(x):
    if x != x:
        return math.nan
    if x >= 709.0:
        return math.inf
    return math.exp(x)


def _num(x):
    x = float(x)
    if math.isnan(x):
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _exp_json(x):
    return _num(_exp(float(x)))


def classify_log_blocks(lmax, lmin=None) -> tuple[str, float | None]:
    """The fixed decision rule on log block maxima (and minima).

    Returns ``(classification, value)``; ``value`` is in linear scale.
    """
    lmax = np.asarray(lmax, dtype=float)
    lmin = lmax if lmin is None else np.asarray(lmin, dtype=float)
    K = len(lmax)
    if K < 5 or np.any(np.isnan(lmax)) or np.any(np.isnan(lmin)):
        return UNKNOWN, None
    last = lmax[-1]
    if last == math.inf:
        return DIVERGES, None
    if last == -math.inf:
        return ZERO, None
    if np.any(np.isposinf(lmax)):
        return UNKNOWN, None
    finite = lmax[np.isfinite(lmax)]
    floor = float(finite.min()) - 1e3
    ell = np.where(np.isneginf(lmax), floor, lmax)
    low = np.where(np.isneginf(lmin), floor, lmin)
    d = np.diff(ell)
    half = K // 2
    tail = ell[half:]

    if np.all(d[-3:] > DELTA):
        return DIVERGES, None
    if (last < LOG_TAU_ZERO and np.all(d[-3:] <= 0)) or np.all(d[-3:] < -DELTA):
        return ZERO, None
    if np.all(np.diff(tail) >= 0) and d[-1] > 0 and tail[-1] - tail[0] > DELTA:
        return DIVERGES, None
    last3 = ell[-3:]
    if (last3.max() - last3.min() <= DELTA and ell[-1] - low[-1] <= DELTA
            and abs(d[-1]) <= abs(d[-2]) + 1e-12):
        mid = 0.5 * (_exp(ell[-1]) + _exp(low[-1]))
        return CONVERGES, mid
    if tail.max() <= ell[:half].max() + DELTA and d[-1] <= DELTA:
        return BOUNDED, _exp(float(ell.max()))
    ks = np.arange(half, K, dtype=float)
    slope = float(np.polyfit(ks, tail, 1)[0])
    if slope > DELTA:
        return DIVERGES, None
    if slope < -DELTA:
        return ZERO, None
    return UNKNOWN, None


def _block_edges(I_max):
    K = int(round(math.log2(I_max)))
    return K, [2 ** k - 1 for k in range(K)]


def trend_from_log_values(logq, I_max) -> TrendReport:
    """Summarise ``log q(i)`` for ``i = 1..I_max-1`` on dyadic blocks."""
    logq = np.asarray(logq, dtype=float)[: I_max - 1]
    K, starts = _block_edges(I_max)
    with np.errstate(invalid="ignore"):
        mx = np.maximum.reduceat(logq, starts)
        mn = np.minimum.reduceat(logq, starts)
    uppers = [2 ** (k + 1) - 1 for k in range(K)]
    cls, value = classify_log_blocks(mx, mn)
    return TrendReport(tuple(zip(uppers, mx.tolist())), tuple(zip(uppers, mn.tolist())),
                       cls, value)


def trend_from_points(labels, logq, axis) -> TrendReport:
    logq = np.asarray(logq, dtype=float)
    cls, value = classify_log_blocks(logq)
    pts = tuple(zip([float(x) for x in labels], logq.tolist()))
    return TrendReport(pts, pts, cls, value, axis)


def detect_trend(sampler: Callable[[int], float], I_max: int, log_scale: bool = False
                 ) -> TrendReport:
    """Sample ``sampler(i)`` for ``i = 1..I_max-1`` and classify its magnitude.

    With ``log_scale`` the sampler already returns ``log q(i)``.
    """
    if I_max < 64 or I_max & (I_max - 1):
        raise BudgetError(f"I_max must be a power of two >= 64, got {I_max}")
    vals = np.empty(I_max - 1)
    for i in range(1, I_max):
        try:
            vals[i - 1] = float(sampler(i))
        except Exception as exc:
            raise type(exc)(f"sampler failed at i={i}: {exc}") from exc
    if not log_scale:
        with np.errstate(divide="ignore"):
            vals = np.log(np.abs(vals))
    return trend_from_log_values(vals, I_max)


# -------------------------------------------------------------- conditions

_PARAM_RE = re.compile(r"^([A-Za-z0-9]+)(?:\(([^()]*)\))?$")
_PARAMETRISED = {"SN": float, "PointEigen": int, "DragilevTau": float}
CONDITION_NAMES = ("K1", "Ginf1", "Ginf2", "G1axioms", "SchwartzI", "SchwartzS", "GPC", "SV",
                   "N", "SN", "U", "L", "DN", "CesContinuity", "CesCompactness",
                   "DContinuity", "PointEigen", "DragilevTau")
AGGREGATES = ("Ginf", "Schwartz", "nuclear", "rapidly_increasing")


@dataclass(frozen=True)
class ConditionId:
    name: str
    param: float | int | None = None

    def __post_init__(self):
        if self.name not in CONDITION_NAMES:
            raise ValueError(f"unknown condition {self.name!r}; known: {', '.join(CONDITION_NAMES)}")
        kind = _PARAMETRISED.get(self.name)
        if kind is None and self.param is not None:
            raise ValueError(f"condition {self.name} takes no parameter")
        if kind is not None:
            if self.param is None:
                raise ValueError(f"condition {self.name} needs a parameter")
            if kind is int and (int(self.param) != self.param or self.param < 1):
                raise ValueError(f"{self.name} needs a positive integer, got {self.param}")
            object.__setattr__(self, "param", kind(self.param))

    def __str__(self):
        if self.param is None:
            return self.name
        return f"{self.name}({self.param:g})"

    @classmethod
    def parse(cls, text: str) -> "ConditionId":
        m = _PARAM_RE.match(text.strip())
        if not m:
            raise ValueError(f"cannot parse condition {text!r}")
        name, arg = m.group(1), m.group(2)
        return cls(name, None if arg is None else float(arg))


def C(text: str) -> ConditionId:
    return ConditionId.parse(text)


# ---------------------------------------------------------------- verdicts

@dataclass
class Verdict:
    condition: str
    status: str
    witness: tuple | None = None
    witnesses: list = field(default_factory=list)
    evidence: list = field(default_factory=list)
    note: str = ""

    @property
    def holds(self):
        return self.status == HOLDS

    @property
    def fails(self):
        return self.status == FAILS

    def summary(self) -> str:
        text = f"{self.condition}: {self.status}"
        if self.witness:
            n, m, bound = self.witness
            text += f" (witness n={n}" + (f", m={m}" if m is not None else "") + \
                    f", bound={bound:.3g})"
        return text + " -- numerically, at finite budget"

    def to_dict(self):
        d = {"condition": self.condition, "status": self.status,
             "blocks": [], "evidence": []}
        if self.witness:
            n, m, bound = self.witness
            d["witness"] = {"n": n, "m": m, "bound": _num(bound)}
        if self.witnesses:
            d["witnesses"] = [{"n": n, "m": m, "bound": _num(b)} for n, m, b in self.witnesses]
        trends = [e["trend"] for e in self.evidence if "trend" in e]
        if trends:
            d["blocks"] = trends[-1]["blocks"]
        d["evidence"] = self.evidence
        if self.note:
            d["note"] = self.note
        return d


# --------------------------------------------------------------- sampling

class _Probe:
    """Log-quantities of one family on the near grid and the far ladder."""

    def __init__(self, family: WeightFamily, budget: Budget):
        self.family = family
        self.budget = budget
        self.size = budget.I_max - 1
        i = np.arange(1, budget.I_max + 1, dtype=float)
        self.near_logi = XArray.from_float(np.log(i[: self.size]))
        self.far_logi = XArray.from_float(np.array([2.0 ** t * math.log(2.0) for t in LADDER_T]))
        self.far_i = XArray.from_log(self.far_logi.val)
        self.far_t_log2 = XArray.from_float(np.array([t * math.log(2.0) for t in LADDER_T]))
        self._far = {}
        self._cum = {}

    def la(self, n, shift=0):
        full = self.family.log_a_range(n, self.budget.I_max)
        return full[shift: shift + self.size]

    def cum_la(self, n):
        if n not in self._cum:
            self._cum[n] = cum_logsumexp(self.la(n))
        return self._cum[n]

    def far_la(self, n, shift=0):
        key = (n, shift)
        if key not in self._far:
            try:
                with cancellation_guard(GUARD_REL):
                    i = self.far_i + float(shift) if shift else self.far_i
                    self._far[key] = self.family.log_a_x(n, i)
            except (ValueError, FloatingPointError):
                self._far[key] = None
        return self._far[key]


def _far_trend(build) -> TrendReport | None:
    """Classify a far-ladder quantity; ``None`` if too few determined points."""
    try:
        with cancellation_guard(GUARD_REL):
            q = build()
    except (ValueError, FloatingPointError, TypeError):
        return None
    if q is None:
        return None
    vals = q.to_float()
    bad = np.flatnonzero(np.isnan(vals))
    stop = int(bad[0]) if len(bad) else len(vals)
    if stop < LADDER_MIN_POINTS:
        return None
    labels = [2.0 ** t * math.log(2.0) for t in LADDER_T[:stop]]
    rep = trend_from_points(labels, vals[:stop], "log_i")
    return None if rep.classification == UNKNOWN else rep


def _combine(near: TrendReport, far: TrendReport | None):
    return (far, "far") if far is not None else (near, "near")


# Evidence classes: map a trend to "holds", "fails" or None.
def _sup_evidence(t):
    if t.bounded:
        return "holds"
    return "fails" if t.classification == DIVERGES else None


def _zero_evidence(t):
    if t.classification == ZERO:
        return "holds"
    return "fails" if t.classification == DIVERGES else None


def _infinite_evidence(t):
    if t.classification == DIVERGES:
        return "holds"
    return "fails" if t.bounded else None


def _tail_sum_evidence(t):
    # twice-condensed tail terms: summable only if they die out
    if t.classification == ZERO:
        return "holds"
    return "fails" if t.classification != UNKNOWN else None


def _opt(x, fn):
    return None if x is None else fn(x)


# Each builder returns (near XArray, far-builder or None, far evidence fn or None).

def _q_ginf2(p, n, m):
    return (2.0 * p.la(n) - p.la(m),
            lambda: _opt(p.far_la(n), lambda a: _opt(p.far_la(m), lambda b: 2.0 * a - b)),
            None)


def _q_g12(p, n, m):
    return (p.la(n) - 2.0 * p.la(m),
            lambda: _opt(p.far_la(n), lambda a: _opt(p.far_la(m), lambda b: a - 2.0 * b)),
            None)


def _q_ratio(p, n, m):
    return (p.la(n) - p.la(m),
            lambda: _opt(p.far_la(n), lambda a: _opt(p.far_la(m), lambda b: a - b)),
            None)


def _q_sn(alpha):
    def build(p, n, m):
        return (alpha * p.near_logi + p.la(n) - p.la(m),
                lambda: _opt(p.far_la(n), lambda a: _opt(
                    p.far_la(m), lambda b: alpha * p.far_logi + a - b)),
                None)
    return build


def _q_gpc(p, n, m):
    return (cum_logsumexp(p.la(n) - p.la(m)),
            lambda: _opt(p.far_la(n), lambda a: _opt(
                p.far_la(m), lambda b: p.far_t_log2 + p.far_logi + a - b)),
            _tail_sum_evidence)


def _q_dn(p, n, m):
    return (2.0 * p.la(n) - p.la(m) - p.la(1),
            lambda: _opt(p.far_la(n), lambda a: _opt(p.far_la(m), lambda b: _opt(
                p.far_la(1), lambda c: 2.0 * a - b - c))),
            None)


def _q_ces(p, n, m):
    return (p.cum_la(n) - p.la(m) - p.near_logi, None, None)


def _q_dcont(p, n, m):
    return (p.near_logi + p.la(n, shift=1) - p.la(m),
            lambda: _opt(p.far_la(n, 1), lambda a: _opt(p.far_la(m), lambda b: p.far_logi + a - b)),
            None)


# single-index quantities (exists n)
def _q_sv(p, n):
    return (cum_logsumexp(-p.la(n)),
            lambda: _opt(p.far_la(n), lambda a: p.far_t_log2 + p.far_logi - a),
            _tail_sum_evidence)


def _q_u(p, n):
    i_near = XArray.from_float(np.arange(1, p.size + 1, dtype=float))
    return (i_near * p.near_logi - p.la(n),
            lambda: _opt(p.far_la(n), lambda a: p.far_i * p.far_logi - a),
            None)


def _q_l(p, n):
    with np.errstate(divide="ignore"):
        near_ll = XArray.from_float(np.log(p.near_logi.val))
    return (near_ll - p.la(n),
            lambda: _opt(p.far_la(n), lambda a: p.far_logi.log() - a),
            None)


def _q_point(s):
    def build(p, n):
        return (s * p.near_logi - p.la(n),
                lambda: _opt(p.far_la(n), lambda a: s * p.far_logi - a),
                None)
    return build


def _q_schwartz_i(p, n):
    return (p.la(n), lambda: p.far_la(n), None)


# ----------------------------------------------------------------- engine

def _evaluate(p, near_x, far_build, far_ev, near_ev):
    near = trend_from_log_values(near_x.to_float(), p.budget.I_max)
    far = _far_trend(far_build) if far_build is not None else None
    trend, where = _combine(near, far)
    ev = (far_ev or near_ev) if where == "far" else near_ev
    return trend, where, ev(trend)


def _record(n, m, trend, where, ev):
    return {"n": n, "m": m, "source": where, "evidence": ev, "trend": trend.to_dict()}


def _forall_exists(p, name, builder, near_ev, fail_status=FAILS):
    b = p.budget
    witnesses, evidence = [], []
    failing_n = None
    for n in range(1, b.N_max + 1):
        found = None
        all_fail = True
        for m in range(n + 1, n + b.M_max + 1):
            near_x, far_build, far_ev = builder(p, n, m)
            trend, where, ev = _evaluate(p, near_x, far_build, far_ev, near_ev)
            evidence.append(_record(n, m, trend, where, ev))
            if ev != "fails":
                all_fail = False
            if ev == "holds":
                found = (n, m, trend.sup)
                break
        if found:
            witnesses.append(found)
        elif all_fail and failing_n is None:
            failing_n = n
    if failing_n is not None:
        return Verdict(name, fail_status, None, witnesses, evidence,
                       note=f"every m in {failing_n + 1}..{failing_n + b.M_max} fails for n={failing_n}")
    if len(witnesses) == b.N_max:
        worst = max(witnesses, key=lambda w: w[2])
        return Verdict(name, HOLDS, worst, witnesses, evidence)
    return Verdict(name, INCONCLUSIVE, None, witnesses, evidence)


def _exists(p, name, builder, near_ev):
    evidence = []
    all_fail = True
    for n in range(1, p.budget.N_max + 1):
        near_x, far_build, far_ev = builder(p, n)
        trend, where, ev = _evaluate(p, near_x, far_build, far_ev, near_ev)
        evidence.append(_record(n, None, trend, where, ev))
        if ev == "holds":
            return Verdict(name, HOLDS, (n, None, trend.sup), [(n, None, trend.sup)], evidence)
        if ev != "fails":
            all_fail = False
    return Verdict(name, FAILS if all_fail else INCONCLUSIVE, None, [], evidence)


def _exists_forall(p, name, builder, near_ev):
    b = p.budget
    evidence = []
    all_fail = True
    for n in range(1, b.N_max + 1):
        good = True
        some_fail = False
        for m in range(n + 1, n + b.M_max + 1):
            near_x, far_build, far_ev = builder(p, n, m)
            trend, where, ev = _evaluate(p, near_x, far_build, far_ev, near_ev)
            evidence.append(_record(n, m, trend, where, ev))
            if ev != "holds":
                good = False
            if ev == "fails":
                some_fail = True
                break
        if good:
            return Verdict(name, HOLDS, (n, None, math.nan), [(n, None, math.nan)], evidence)
        if not some_fail:
            all_fail = False
    return Verdict(name, FAILS if all_fail else INCONCLUSIVE, None, [], evidence)


def _pointwise(p, name, violations: Iterable[tuple]):
    """For-all scans over the sampled grid; ``violations`` yields (n, i) pairs."""
    bad = list(violations)
    if bad:
        n, i = bad[0]
        return Verdict(name, FAILS, None, [], [{"n": n, "i": i, "violation": True}],
                       note=f"violated at n={n}, i={i}")
    return Verdict(name, HOLDS, None, [], [],
                   note=f"checked all i <= {p.budget.I_max}, n <= {p.budget.N_max + 1}")


def _first_violation(mask, i_offset=1):
    idx = np.flatnonzero(mask)
    return int(idx[0]) + i_offset if len(idx) else None


def _le(a: XArray, b: XArray, rel=1e-12):
    """a <= b with a small relative slack (float path); undetermined counts as fine."""
    d = (b - a).to_float()
    scale = np.maximum(np.abs(a.to_float()), np.abs(b.to_float()))
    with np.errstate(invalid="ignore"):
        ok = (d >= -rel * np.where(np.isfinite(scale), scale, 0.0)) | np.isnan(d)
    return ok


def _check_k1(p):
    def gen():
        for n in range(1, p.budget.N_max + 1):
            i = _first_violation(~_le(p.la(n), p.la(n + 1)))
            if i is not None:
                yield (n, i)
    return _pointwise(p, "K1", gen())


def _check_ginf1(p):
    def gen():
        for n in range(1, p.budget.N_max + 2):
            a = p.la(n)
            i = _first_violation(~_le(XArray.from_float(np.zeros(p.size)), a))
            if i is None:
                i = _first_violation(~_le(a, p.la(n, shift=1)))
            if i is not None:
                yield (n, i)
    return _pointwise(p, "Ginf1", gen())


def _check_g1(p):
    def gen():
        for n in range(1, p.budget.N_max + 2):
            i = _first_violation(~_le(p.la(n, shift=1), p.la(n)))
            if i is not None:
                yield (n, i)
    mono = _pointwise(p, "G1axioms", gen())
    if mono.fails:
        return mono
    second = _forall_exists(p, "G1axioms", _q_g12, _sup_evidence)
    second.note = "monotone decreasing in i on the grid; " + (second.note or "")
    return second


def _check_dragilev(p, rho):
    fam = p.family
    xs = np.array(DRAGILEV_X)
    try:
        with cancellation_guard(GUARD_REL):
            fx = fam.log_a_x(1, xs)
            frx = fam.log_a_x(1, rho * xs)
            if np.any(fx.sgn <= 0) or np.any(frx.sgn <= 0):
                return Verdict(f"DragilevTau({rho:g})", INCONCLUSIVE,
                               note="log a_1 is not positive on the probe points")
            q = frx.log() - fx.log()
    except (ValueError, FloatingPointError) as exc:
        return Verdict(f"DragilevTau({rho:g})", INCONCLUSIVE, note=str(exc))
    trend = trend_from_points(xs, q.to_float(), "x")
    ev = _infinite_evidence(trend) if trend.classification != UNKNOWN else None
    status = {"holds": HOLDS, "fails": FAILS}.get(ev, INCONCLUSIVE)
    rec = {"n": 1, "m": None, "source": "x-ladder", "evidence": ev, "trend": trend.to_dict()}
    return Verdict(f"DragilevTau({rho:g})", status, None, [], [rec],
                   note="ratio log f(rho x) - log f(x) with f(x) = log a_1(x)")


def check(family: WeightFamily, cond, budget: Budget | None = None, _probe=None) -> Verdict:
    """Numerically test one condition on ``family`` within ``budget``."""
    if isinstance(cond, str):
        cond = ConditionId.parse(cond)
    budget = budget or Budget()
    p = _probe or _Probe(family, budget)
    name, par = cond.name, cond.param
    label = str(cond)
    if name == "K1":
        return _check_k1(p)
    if name == "Ginf1":
        return _check_ginf1(p)
    if name == "G1axioms":
        return _check_g1(p)
    if name == "Ginf2":
        return _forall_exists(p, label, _q_ginf2, _sup_evidence)
    if name == "SchwartzS":
        return _forall_exists(p, label, _q_ratio, _zero_evidence)
    if name == "SchwartzI":
        return _exists(p, label, _q_schwartz_i, _infinite_evidence)
    if name == "GPC":
        return _forall_exists(p, label, _q_gpc, _sup_evidence)
    if name == "SV":
        return _exists(p, label, _q_sv, _sup_evidence)
    if name == "N":
        return _forall_exists(p, label, _q_sn(1.0), _sup_evidence)
    if name == "SN":
        return _forall_exists(p, label, _q_sn(par), _sup_evidence)
    if name == "U":
        return _exists(p, label, _q_u, _sup_evidence)
    if name == "L":
        return _exists(p, label, _q_l, _sup_evidence)
    if name == "DN":
        v = _forall_exists(p, label, _q_dn, _sup_evidence, fail_status=INCONCLUSIVE)
        if v.status != HOLDS:
            v.note = "pointwise sufficient form (s = 1) not confirmed; " + v.note
        return v
    if name == "CesContinuity":
        return _forall_exists(p, label, _q_ces, _sup_evidence)
    if name == "CesCompactness":
        return _exists_forall(p, label, _q_ces, _zero_evidence)
    if name == "DContinuity":
        return _forall_exists(p, label, _q_dcont, _sup_evidence)
    if name == "PointEigen":
        return _exists(p, label, _q_point(float(par)), _zero_evidence)
    if name == "DragilevTau":
        return _check_dragilev(p, float(par))
    raise ValueError(f"unhandled condition {cond}")  # pragma: no cover


# ----------------------------------------------------------- classification

DEFAULT_CONDITIONS = (
    "K1", "Ginf1", "Ginf2", "G1axioms", "SchwartzI", "SchwartzS", "GPC", "SV", "N", "SN(2)",
    "U", "L", "DN", "CesContinuity", "CesCompactness", "DContinuity",
    *(f"PointEigen({s})" for s in range(1, 7)), "DragilevTau(1.5)", "DragilevTau(2)",
)


@dataclass
class SpaceClassification:
    family: str
    budget: Budget
    verdicts: dict
    aggregates: dict
    inconsistencies: list

    def status(self, key: str) -> str:
        if key in self.aggregates:
            return self.aggregates[key]
        if key in self.verdicts:
            return self.verdicts[key].status
        raise KeyError(key)

    def declared_mismatches(self, declared: dict) -> list:
        want = {"holds": HOLDS, "fails": FAILS}
        out = []
        for key, flag in declared.items():
            if flag not in want:
                continue
            got = self.status(key)
            if got != want[flag]:
                out.append((key, flag, got))
        return out

    def to_dict(self):
        return {"family": self.family, "budget": self.budget.as_dict(),
                "aggregates": dict(self.aggregates),
                "verdicts": {k: v.to_dict() for k, v in self.verdicts.items()},
                "inconsistencies": list(self.inconsistencies),
                "caveat": "numerical evidence at finite budget"}


def _and(*st):
    if all(s == HOLDS for s in st):
        return HOLDS
    if any(s == FAILS for s in st):
        return FAILS
    return INCONCLUSIVE


def _consensus(*st):
    known = {s for s in st if s != INCONCLUSIVE}
    return known.pop() if len(known) == 1 else INCONCLUSIVE


def classify(family: WeightFamily, budget: Budget | None = None,
             conditions: Iterable[str] = DEFAULT_CONDITIONS) -> SpaceClassification:
    """Run every condition and derive aggregates plus a consistency ledger."""
    budget = budget or Budget()
    p = _Probe(family, budget)
    verdicts = {}
    for text in conditions:
        cond = ConditionId.parse(text)
        verdicts[str(cond)] = check(family, cond, budget, _probe=p)
    st = {k: v.status for k, v in verdicts.items()}
    get = lambda k: st.get(k, INCONCLUSIVE)  # noqa: E731

    ginf = _and(get("Ginf1"), get("Ginf2"))
    if get("SchwartzS") == HOLDS or (ginf == HOLDS and get("SchwartzI") == HOLDS):
        schwartz = HOLDS
    elif get("SchwartzS") == FAILS and (ginf != HOLDS or get("SchwartzI") == FAILS):
        schwartz = FAILS
    else:
        schwartz = INCONCLUSIVE
    if ginf == HOLDS:
        nuclear = _consensus(get("GPC"), get("SV"), get("N"))
    else:
        nuclear = get("GPC")
    rapid = _and(get("DragilevTau(1.5)"), get("DragilevTau(2)"))
    aggregates = {"Ginf": ginf, "Schwartz": schwartz, "nuclear": nuclear,
                  "rapidly_increasing": rapid}

    issues = []

    def clash(a, b):
        return a != INCONCLUSIVE and b != INCONCLUSIVE and a != b

    if ginf == HOLDS:
        for a, b in (("GPC", "SV"), ("SV", "N"), ("GPC", "N")):
            if clash(get(a), get(b)):
                issues.append(f"{a}={get(a)} but {b}={get(b)} for a G-infinity family")
        if schwartz == HOLDS and clash(get("PointEigen(1)"), get("N")):
            issues.append(f"PointEigen(1)={get('PointEigen(1)')} but N={get('N')} "
                          "for a Schwartz G-infinity family")
        if get("U") == HOLDS and get("N") == FAILS:
            issues.append("U holds but N fails")
    if get("Ginf1") == HOLDS and get("SchwartzS") == HOLDS and get("CesContinuity") == FAILS:
        issues.append("Ginf1 and SchwartzS hold but CesContinuity fails")
    if get("U") == HOLDS and get("SV") == FAILS:
        issues.append("U holds but SV fails")
    return SpaceClassification(family.name, budget, verdicts, aggregates, issues)
