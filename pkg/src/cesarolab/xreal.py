"""Extended-range real arrays.

Weight families such as a_n(i) = exp(i n e^{i n}) overflow double precision for
tiny indices, while every criterion only needs ratios, products and sums of
them.  An :class:`XArray` keeps the ordinary float value where it is
representable and falls back to a signed log-magnitude representation where it
is not, so ``log a_n(i)`` can itself be astronomically large without losing
the sign or the order of magnitude of differences between two such values.

Entries whose value cannot be determined (``inf - inf``, ``0 * inf``, or a
subtraction that cancels below the working precision while a cancellation
guard is active) are flagged with NaN in every field.
"""
from __future__ import annotations

import contextlib
import contextvars
import math

import numpy as np

LOG_FLOAT_MAX = 709.0

_guard = contextvars.ContextVar("xreal_cancellation_guard", default=0.0)


@contextlib.contextmanager
def cancellation_guard(rel: float = 1e-9):
    """Mark subtractions that lose more than ``-log10(rel)`` digits as undetermined."""
    token = _guard.set(rel)
    try:
        yield
    finally:
        _guard.reset(token)


def _value_from_log(sgn, lmag):
    with np.errstate(over="ignore", invalid="ignore"):
        val = sgn * np.exp(np.minimum(lmag, LOG_FLOAT_MAX))
    val = np.where(lmag < LOG_FLOAT_MAX, val, np.nan)
    return np.where(sgn == 0, 0.0, val)


class XArray:
    """Real array with float values where representable and log-magnitudes everywhere."""

    __slots__ = ("val", "sgn", "lmag")

    def __init__(self, val, sgn, lmag):
        self.val = np.asarray(val, dtype=float)
        self.sgn = np.asarray(sgn, dtype=float)
        self.lmag = np.asarray(lmag, dtype=float)

    # construction -----------------------------------------------------
    @classmethod
    def from_float(cls, values) -> "XArray":
        v = np.asarray(values, dtype=float)
        sgn = np.sign(v)
        with np.errstate(divide="ignore"):
            lmag = np.log(np.abs(v))
        # float infinities are treated as "too large to tell", not as values
        big = np.isinf(v)
        val = np.where(big, np.nan, v)
        return cls(val, sgn, lmag)

    @classmethod
    def from_log(cls, logs, sign=1.0) -> "XArray":
        """The positive numbers ``exp(logs)``."""
        lmag = np.asarray(logs, dtype=float)
        sgn = np.where(np.isnan(lmag), np.nan, np.where(lmag == -np.inf, 0.0, sign))
        return cls(_value_from_log(sgn, lmag), sgn, lmag)

    @classmethod
    def undetermined_like(cls, shape) -> "XArray":
        nan = np.full(shape, np.nan)
        return cls(nan, nan.copy(), nan.copy())

    # inspection -------------------------------------------------------
    @property
    def shape(self):
        return self.val.shape

    @property
    def undetermined(self):
        return np.isnan(self.sgn) | np.isnan(self.lmag)

    def __len__(self):
        return len(self.val)

    def __getitem__(self, idx) -> "XArray":
        return XArray(self.val[idx], self.sgn[idx], self.lmag[idx])

    def to_float(self):
        """Float values, saturating to +-inf where the magnitude overflows."""
        with np.errstate(invalid="ignore"):
            out = np.where(np.isnan(self.val), self.sgn * np.inf, self.val)
            out = np.where(self.undetermined, np.nan, out)
        return out

    def __repr__(self):
        return f"XArray({self.to_float()!r})"

    # arithmetic -------------------------------------------------------
    def _mask_bad(self, bad) -> "XArray":
        if not np.any(bad):
            return self
        return XArray(np.where(bad, np.nan, self.val), np.where(bad, np.nan, self.sgn),
                      np.where(bad, np.nan, self.lmag))

    def __neg__(self) -> "XArray":
        return XArray(-self.val, -self.sgn, self.lmag)

    def __add__(self, other) -> "XArray":
        other = _as_x(other)
        a, b = self, other
        guard = _guard.get()
        with np.errstate(all="ignore"):
            fast_v = a.val + b.val
            fast = np.isfinite(fast_v)
            if guard > 0:
                scale = np.maximum(np.abs(a.val), np.abs(b.val))
                cancel = (a.sgn * b.sgn < 0) & (np.abs(fast_v) < guard * scale)
            else:
                cancel = np.zeros(fast.shape, dtype=bool)

            # log-magnitude path
            hi = np.maximum(a.lmag, b.lmag)
            lo = np.minimum(a.lmag, b.lmag)
            a_big = a.lmag >= b.lmag
            sgn_hi = np.where(a_big, a.sgn, b.sgn)
            sgn_lo = np.where(a_big, b.sgn, a.sgn)
            r = np.exp(lo - hi)
            r = np.where(lo == -np.inf, 0.0, r)
            same = (sgn_hi * sgn_lo >= 0)
            l_same = hi + np.log1p(r)
            l_opp = hi + np.log1p(-r)
            lmag = np.where(same, l_same, l_opp)
            lmag = np.where(hi == -np.inf, -np.inf, lmag)
            sgn = np.where(sgn_hi == 0, sgn_lo, sgn_hi)
            sgn = np.where(lmag == -np.inf, 0.0, sgn)
            bad_log = (~same) & ((r >= 1.0) | ((guard > 0) & (1.0 - r < guard)))
            bad_log |= np.isnan(lmag)
            log_res = XArray(_value_from_log(sgn, lmag), sgn, lmag)._mask_bad(bad_log)

            fast_res = XArray.from_float(np.where(fast, fast_v, 0.0))
            val = np.where(fast, fast_res.val, log_res.val)
            sgn = np.where(fast, fast_res.sgn, log_res.sgn)
            lmag = np.where(fast, fast_res.lmag, log_res.lmag)
        out = XArray(val, sgn, lmag)
        return out._mask_bad(cancel | a.undetermined | b.undetermined)

    __radd__ = __add__

    def __sub__(self, other) -> "XArray":
        return self + (-_as_x(other))

    def __rsub__(self, other) -> "XArray":
        return _as_x(other) + (-self)

    def __mul__(self, other) -> "XArray":
        other = _as_x(other)
        a, b = self, other
        with np.errstate(all="ignore"):
            fast_v = a.val * b.val
            fast = np.isfinite(fast_v) & ((fast_v != 0) | (a.sgn == 0) | (b.sgn == 0))
            sgn = a.sgn * b.sgn
            lmag = a.lmag + b.lmag
            # 0 * huge is a genuine zero only when the huge factor is finite in log form
            zero = (a.sgn == 0) | (b.sgn == 0)
            bad = zero & (np.isinf(a.lmag) & (a.lmag > 0) | np.isinf(b.lmag) & (b.lmag > 0))
            lmag = np.where(zero, -np.inf, lmag)
            sgn = np.where(zero, 0.0, sgn)
            log_val = _value_from_log(sgn, lmag)
            fast_lm = np.log(np.abs(fast_v))
            val = np.where(fast, fast_v, log_val)
            lmag = np.where(fast, fast_lm, lmag)
            sgn = np.where(fast, np.sign(fast_v), sgn)
        return XArray(val, sgn, lmag)._mask_bad(bad | a.undetermined | b.undetermined)

    __rmul__ = __mul__

    def reciprocal(self) -> "XArray":
        with np.errstate(all="ignore"):
            sgn = self.sgn
            lmag = -self.lmag
            fast = np.isfinite(self.val) & (self.val != 0)
            fast_v = 1.0 / self.val
            fast &= np.isfinite(fast_v)
            val = np.where(fast, fast_v, _value_from_log(sgn, lmag))
        return XArray(val, sgn, lmag)._mask_bad(self.undetermined)

    def __truediv__(self, other) -> "XArray":
        return self * _as_x(other).reciprocal()

    def __rtruediv__(self, other) -> "XArray":
        return _as_x(other) * self.reciprocal()

    def exp(self) -> "XArray":
        with np.errstate(all="ignore"):
            known = np.isfinite(self.val)
            # a value too large for a float: exp of it is +inf in log form or exactly 0
            lmag = np.where(known, self.val, np.where(self.sgn > 0, np.inf, -np.inf))
            sgn = np.where(lmag == -np.inf, 0.0, 1.0)
            fast_v = np.exp(self.val)
            fast = known & np.isfinite(fast_v) & (fast_v > 0)
            val = np.where(fast, fast_v, _value_from_log(sgn, lmag))
        return XArray(val, sgn, lmag)._mask_bad(self.undetermined)

    def log(self) -> "XArray":
        """Natural log; callers must ensure positivity (non-positive entries give NaN)."""
        with np.errstate(all="ignore"):
            bad = self.sgn <= 0
            fast = np.isfinite(self.val) & (self.val > 0)
            v = np.where(fast, np.log(self.val), self.lmag)
        out = XArray.from_float(v)
        # log of an entry already at +inf in log form stays "too large"
        huge = np.isposinf(self.lmag)
        if np.any(huge):
            out = XArray(np.where(huge, np.nan, out.val), np.where(huge, 1.0, out.sgn),
                         np.where(huge, np.inf, out.lmag))
        return out._mask_bad(bad | self.undetermined)

    def pow(self, other) -> "XArray":
        other = _as_x(other)
        with np.errstate(all="ignore"):
            fast_v = np.power(self.val, other.val)
            fast = np.isfinite(fast_v) & np.isfinite(self.val) & np.isfinite(other.val)
            integral = np.isfinite(other.val) & (np.round(other.val) == other.val)
            odd = integral & (np.abs(np.fmod(other.val, 2.0)) == 1.0)
        mag = XArray(np.abs(self.val), np.abs(self.sgn), self.lmag)
        slow = (mag.log() * other).exp()
        sign = np.where((self.sgn < 0) & odd, -1.0, 1.0)
        slow = XArray(sign * slow.val, sign * slow.sgn, slow.lmag)
        res = XArray.from_float(np.where(fast, fast_v, 0.0))
        val = np.where(fast, res.val, slow.val)
        sgn = np.where(fast, res.sgn, slow.sgn)
        lmag = np.where(fast, res.lmag, slow.lmag)
        return XArray(val, sgn, lmag)._mask_bad(self.undetermined | other.undetermined)


def less_equal(a: XArray, b: XArray):
    """Elementwise a <= b (NaN-free boolean; undetermined entries compare True)."""
    d = (b - a)
    with np.errstate(invalid="ignore"):
        return np.where(d.undetermined, True, d.sgn >= 0)


def _as_x(x) -> XArray:
    if isinstance(x, XArray):
        return x
    return XArray.from_float(x)


def _scalar_diff(va, sa, la, vb, sb, lb) -> float:
    """Float value of a - b for scalar XArray components, saturating to +-inf."""
    if math.isnan(sa) or math.isnan(sb):
        return math.nan
    if math.isfinite(va) and math.isfinite(vb):
        return va - vb
    sb = -sb
    if la >= lb:
        hi, lo, s_hi, s_lo = la, lb, sa, sb
    else:
        hi, lo, s_hi, s_lo = lb, la, sb, sa
    if hi == -math.inf:
        return 0.0
    r = 0.0 if lo == -math.inf else math.exp(lo - hi)
    if s_hi * s_lo >= 0:
        lm = hi + math.log1p(r)
    else:
        if r >= 1.0:
            return math.nan
        lm = hi + math.log1p(-r)
    sign = s_hi if s_hi != 0 else s_lo
    if lm >= LOG_FLOAT_MAX:
        return sign * math.inf
    return sign * math.exp(lm)


def cum_logsumexp(x: XArray) -> XArray:
    """Running ``log(sum_{j<=i} exp(x_j))`` for exponents that may themselves overflow.

    The sum is carried as ``x[ref] + log(acc)`` where ``ref`` is the running
    argmax, so only differences ``x_j - x_ref`` are ever exponentiated.
    """
    n = len(x)
    if n == 0:
        return x
    # exponents that are hugely negative contribute nothing
    floats = np.where(np.isnan(x.val) & (x.sgn < 0), -np.inf, x.val)
    if not np.any(np.isnan(floats)):
        return XArray.from_float(np.logaddexp.accumulate(floats))
    ref = np.empty(n, dtype=np.int64)
    log_acc = np.empty(n)
    r = 0
    acc = 1.0
    ref[0] = 0
    log_acc[0] = 0.0
    val, sgn, lmag = x.val.tolist(), x.sgn.tolist(), x.lmag.tolist()
    for j in range(1, n):
        d = _scalar_diff(val[j], sgn[j], lmag[j], val[r], sgn[r], lmag[r])
        if math.isnan(d):
            acc = math.nan
        elif d <= 0:
            if d > -745.0:
                acc += math.exp(d)
        else:
            acc = acc * math.exp(-d) + 1.0 if d < 745.0 else 1.0
            r = j
        ref[j] = r
        log_acc[j] = math.log(acc) if acc == acc else math.nan
    out = x[ref] + XArray.from_float(log_acc)
    return out
