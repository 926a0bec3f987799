"""Iterates of the Cesàro operator on weighted sup-norm spaces and the closed-range inverse."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .sections import EXACT, TriMatrix, _zeros, cesaro_apply
from .weights import WeightFamily, q_norm
from .xreal import XArray, cum_logsumexp

GUARD_FACTOR = 1e-15
NORM_SLACK = 1e-12


class TruncationGuardError(ValueError):
    """The finite vector is too short for the weighted norm to ignore its tail."""


def apply_cesaro(x) -> np.ndarray:
    """``(Cx)_i = (x_1 + ... + x_i)/i`` in O(N)."""
    x = np.asarray(x, dtype=complex)
    return np.cumsum(x) / np.arange(1, len(x) + 1)


def truncation_guard(family: WeightFamily, n: int, x) -> tuple[bool, float]:
    """Check ``v_n(N) max|x| < 1e-15 q_n(x)``; returns (ok, log margin)."""
    x = np.asarray(x)
    N = len(x)
    top = float(np.max(np.abs(x)))
    q = q_norm(family, n, x)
    if top == 0:
        return True, -math.inf
    lhs = -family.log_a_range(n, N).to_float()[N - 1] + math.log(top)
    rhs = math.log(GUARD_FACTOR) + math.log(q) if q > 0 else -math.inf
    return bool(lhs < rhs), lhs - rhs


def _require_guard(family, n, x):
    ok, margin = truncation_guard(family, n, x)
    if not ok:
        raise TruncationGuardError(
            f"{family.name}: v_{n}(N) max|x| is not below 1e-15 q_{n}(x) at N = {len(x)} "
            f"(log margin {margin:.3g}); use a longer vector or a larger n")


@dataclass
class ErgodicReport:
    k_schedule: list
    distances: list = field(default_factory=list)
    norm_ratios: list = field(default_factory=list)
    bound_violations: int = 0
    halving_ok: bool | None = None
    eventually_decreasing: bool | None = None

    def rows(self):
        return list(zip(self.k_schedule, self.distances or [None] * len(self.k_schedule),
                        self.norm_ratios or [None] * len(self.k_schedule)))


def power_bound_check(family: WeightFamily, n: int, x, k_max: int) -> ErgodicReport:
    """Verify ``q_n(C^k x) <= q_n(x) (1 + 1e-12)`` for ``k = 1..k_max``."""
    x = np.asarray(x, dtype=complex)
    _require_guard(family, n, x)
    base = q_norm(family, n, x)
    report = ErgodicReport(list(range(1, k_max + 1)))
    y = x
    for _ in range(k_max):
        y = apply_cesaro(y)
        q = q_norm(family, n, y)
        report.norm_ratios.append(q / base if base else 0.0)
        if q > base * (1 + NORM_SLACK):
            report.bound_violations += 1
    return report


def cesaro_means(family: WeightFamily, n: int, x, k_schedule) -> ErgodicReport:
    """Distances ``q_n(T_[k] x - x_1 1)`` of the Cesàro means to the ergodic limit."""
    x = np.asarray(x, dtype=complex)
    _require_guard(family, n, x)
    sched = sorted(int(k) for k in k_schedule)
    if not sched or sched[0] < 1:
        raise ValueError("k_schedule must hold positive iterate counts")
    limit = np.full(len(x), x[0])
    report = ErgodicReport(sched)
    base = q_norm(family, n, x)
    total = np.zeros(len(x), dtype=complex)
    y = x
    want = iter(sched)
    target = next(want)
    for k in range(1, sched[-1] + 1):
        y = apply_cesaro(y)
        total += y
        if q_norm(family, n, y) > base * (1 + NORM_SLACK):
            report.bound_violations += 1
        if k == target:
            report.distances.append(q_norm(family, n, total / k - limit))
            report.norm_ratios.append(q_norm(family, n, y) / base if base else 0.0)
            target = next(want, None)
    d = report.distances
    report.halving_ok = d[-1] <= d[0] / 2
    tail = d[len(d) // 2:]
    report.eventually_decreasing = all(b <= a for a, b in zip(tail, tail[1:]))
    return report


def fixed_point_exact(N: int) -> bool:
    """``C 1 = 1`` in exact arithmetic."""
    ones = [Fraction(1)] * N
    return cesaro_apply(ones) == ones


def decompose(x):
    """Split ``x = x_1 1 + (x - x_1 1)``; the second part has first entry 0."""
    x = [Fraction(v) for v in x]
    fixed = [x[0]] * len(x)
    rest = [a - b for a, b in zip(x, fixed)]
    return fixed, rest


# ----------------------------------------------------- closed range

def _shifted_difference(N: int) -> TriMatrix:
    """``T = S (I - C) S^-1`` on N coordinates: insert a leading 0, apply I - C, drop it."""
    e = _zeros(N, EXACT)
    for j in range(N):
        x = [Fraction(0)] * (N + 1)
        x[j + 1] = Fraction(1)
        cx = cesaro_apply(x)
        col = [a - b for a, b in zip(x, cx)][1:]
        for i in range(N):
            e[i, j] = col[i]
    return TriMatrix(N, EXACT, e, "shifted_I_minus_C")


def range_inverse_matrix(N: int) -> TriMatrix:
    """``b_ij = 1/j`` for ``j < i`` and ``(i+1)/i`` on the diagonal."""
    e = _zeros(N, EXACT)
    for i in range(1, N + 1):
        for j in range(1, i):
            e[i - 1, j - 1] = Fraction(1, j)
        e[i - 1, i - 1] = Fraction(i + 1, i)
    return TriMatrix(N, EXACT, e, "range_inverse")


@dataclass(frozen=True)
class RangeInverseResult:
    N: int
    left_ok: bool
    right_ok: bool

    @property
    def ok(self):
        return self.left_ok and self.right_ok


def range_inverse_check(N: int) -> RangeInverseResult:
    if N < 2:
        raise ValueError("range_inverse_check needs N >= 2")
    T = _shifted_difference(N)
    B = range_inverse_matrix(N)
    return RangeInverseResult(N, (T @ B).is_identity(), (B @ T).is_identity())


def range_inverse_row_bound(family: WeightFamily, n: int, m: int, N: int) -> dict:
    """Compare ``sum_j (v_m(i+1)/v_n(j+1)) b_ij`` with ``(v_m(i+1)/v_n(i+1)) (3 + log i)``.

    Returns the largest log-ratio lhs/rhs over ``2 <= i <= N`` (must be <= 0)
    and the largest ``log((3 + log i) v_n(i+1))``.
    """
    la_n = family.log_a_range(n, N + 1)       # entry k is logA_n(k+1)
    la_m = family.log_a_range(m, N + 1)
    i = np.arange(1, N + 1, dtype=float)
    # terms for j = 1..N: logA_n(j+1) - log j
    off = la_n[1: N + 1] - XArray.from_float(np.log(i))
    prefix = cum_logsumexp(off)               # entry k: sum over j <= k+1
    diag = la_n[1: N + 1] + XArray.from_float(np.log((i + 1) / i))
    ii = np.arange(2, N + 1)
    below = prefix[ii - 2]                    # sum over j <= i-1
    inner = _logaddexp_x(below, diag[ii - 1])
    lhs = inner - la_m[ii]
    rhs = la_n[ii] - la_m[ii] + XArray.from_float(np.log(3 + np.log(ii)))
    ratio = (lhs - rhs).to_float()
    weight = (XArray.from_float(np.log(3 + np.log(ii))) - la_n[ii]).to_float()
    return {"max_log_ratio": float(np.nanmax(ratio)), "max_log_weighted": float(np.nanmax(weight)),
            "ok": bool(np.nanmax(ratio) <= 1e-12)}


def _logaddexp_x(a: XArray, b: XArray) -> XArray:
    """Elementwise ``log(exp(a) + exp(b))``."""
    hi = XArray(np.where(_gt(b, a), b.val, a.val), np.where(_gt(b, a), b.sgn, a.sgn),
                np.where(_gt(b, a), b.lmag, a.lmag))
    lo_minus_hi = -_abs_x(a - b)
    return hi + XArray.from_float(np.log1p(np.exp(lo_minus_hi.to_float())))


def _gt(b: XArray, a: XArray):
    d = b - a
    return d.sgn > 0


def _abs_x(a: XArray) -> XArray:
    return XArray(np.abs(a.val), np.abs(a.sgn), a.lmag)
