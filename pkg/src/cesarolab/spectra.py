"""Spectrum prediction from a classification, membership queries, and row-sum evidence."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .criteria import (FAILS, HOLDS, INCONCLUSIVE, SpaceClassification, TrendReport,
                       trend_from_log_values)
from .sections import SingularParameterError, _factors, _prefix_products
from .weights import WeightFamily
from .xreal import XArray, cum_logsumexp

NUCLEAR_SIGMA = "NuclearSigma"
DISK_OPEN_PLUS_ENDPOINTS = "DiskOpenPlusEndpoints"
DISK_CLOSED = "DiskClosed"

INSIDE, BOUNDARY_IN, BOUNDARY_OUT, OUTSIDE = "inside", "boundary-in", "boundary-out", "outside"
BOUNDARY_REL_TOL = 1e-12

_SHAPE_TEXT = {
    NUCLEAR_SIGMA: "{1/m : m in N}",
    DISK_OPEN_PLUS_ENDPOINTS: "{0, 1} union D(1)",
    DISK_CLOSED: "closure of D(1)",
}


class InsufficientClassification(ValueError):
    def __init__(self, missing):
        self.missing = tuple(missing)
        super().__init__("classification is not decisive for: " + ", ".join(self.missing))


@dataclass(frozen=True)
class SpectrumDescription:
    shape: str
    sigma_pt: str
    sigma_star: str | None = None
    notes: tuple = ()

    def to_dict(self):
        return {"shape": self.shape, "set": _SHAPE_TEXT[self.shape], "sigma_pt": self.sigma_pt,
                "sigma_star": self.sigma_star if self.sigma_star else "not specified",
                "notes": list(self.notes)}


def predict(classification: SpaceClassification) -> SpectrumDescription:
    """Pick the spectrum shape that the classification's verdicts imply."""
    agg = classification.aggregates
    need = {"Ginf": agg.get("Ginf", INCONCLUSIVE), "Schwartz": agg.get("Schwartz", INCONCLUSIVE),
            "nuclear": agg.get("nuclear", INCONCLUSIVE)}
    missing = [k for k in ("Ginf", "Schwartz") if need[k] != HOLDS]
    if need["nuclear"] == INCONCLUSIVE:
        missing.append("nuclear")
    lstat = classification.verdicts["L"].status if "L" in classification.verdicts else INCONCLUSIVE
    if need["nuclear"] == FAILS and lstat == INCONCLUSIVE:
        missing.append("L")
    if missing:
        raise InsufficientClassification(missing)
    caveat = "predicted from numerical evidence at finite budget"
    if need["nuclear"] == HOLDS:
        return SpectrumDescription(NUCLEAR_SIGMA, "{1/m : m in N}", "{0} union {1/m : m in N}",
                                   (caveat,))
    notes = (caveat, "0 lies in the spectrum but is not an eigenvalue",
             "sigma* is not specified outside the nuclear case")
    shape = DISK_OPEN_PLUS_ENDPOINTS if lstat == HOLDS else DISK_CLOSED
    return SpectrumDescription(shape, "{1}", None, notes)


# ------------------------------------------------------------ membership

def _parse_scalar(lam):
    """Return ``(re, im, exact)``; rationals stay exact."""
    if isinstance(lam, tuple) and len(lam) == 2:
        re, im = lam
    elif isinstance(lam, (int, Fraction)):
        re, im = lam, 0
    else:
        c = complex(lam)
        re, im = c.real, c.imag
    exact = all(isinstance(v, (int, Fraction)) for v in (re, im))
    if exact:
        return Fraction(re), Fraction(im), True
    return float(re), float(im), False


def reciprocal_real_part(lam):
    """``a(lam) = Re(1/lam)``; exact for rational input, ``inf`` at 0."""
    re, im, exact = _parse_scalar(lam)
    if re == 0 and im == 0:
        return math.inf
    return re / (re * re + im * im)


def in_sigma(lam) -> bool:
    """Is ``lam = 1/m`` for a positive integer m?"""
    re, im, exact = _parse_scalar(lam)
    if im != 0 or re <= 0:
        return False
    if exact:
        inv = 1 / re
        return inv.denominator == 1
    inv = 1.0 / re
    m = round(inv)
    return m >= 1 and abs(inv - m) <= BOUNDARY_REL_TOL * m


def _disk_position(lam):
    """-1 outside closure of D(1), 0 on its boundary (excluding 0), +1 inside D(1), None at 0."""
    re, im, exact = _parse_scalar(lam)
    if re == 0 and im == 0:
        return None
    a = reciprocal_real_part(lam)
    if exact:
        return (a > 1) - (a < 1)
    if abs(a - 1.0) <= BOUNDARY_REL_TOL:
        return 0
    return 1 if a > 1 else -1


def member(desc: SpectrumDescription, lam) -> str:
    """Where ``lam`` sits relative to the predicted spectrum."""
    pos = _disk_position(lam)
    if desc.shape == NUCLEAR_SIGMA:
        return INSIDE if in_sigma(lam) else OUTSIDE
    if desc.shape == DISK_OPEN_PLUS_ENDPOINTS:
        if pos is None:
            return BOUNDARY_IN
        if pos == 0:
            re, im, _ = _parse_scalar(lam)
            return BOUNDARY_IN if (re == 1 and im == 0) else BOUNDARY_OUT
        return INSIDE if pos > 0 else OUTSIDE
    if desc.shape == DISK_CLOSED:
        if pos is None or pos == 0:
            return BOUNDARY_IN
        return INSIDE if pos > 0 else OUTSIDE
    raise ValueError(f"unknown shape {desc.shape!r}")


def contains(desc: SpectrumDescription, lam) -> bool:
    return member(desc, lam) in (INSIDE, BOUNDARY_IN)


# ------------------------------------------------------------ evidence

def row_sum_evidence(family: WeightFamily, lam, n: int, m: int, N: int) -> TrendReport:
    """Trend of ``sum_{j<i} (v_m(i)/v_n(j)) |e_ij(lam)|`` over ``i <= N``.

    With ``P(i) = sum_{k<=i} log|1 - 1/(k lam)|`` the summand is
    ``exp(logA_n(j) + P(j-1) - log i - P(i) - logA_m(i))``; the inner sum is a
    streaming log-sum-exp.  Bounded trends corroborate continuity of the
    resolvent at ``lam``; divergence corroborates ``lam`` in the spectrum.
    """
    if N < 256 or N & (N - 1):
        raise ValueError(f"N must be a power of two >= 256, got {N}")
    if not n < m:
        raise ValueError("row_sum_evidence needs n < m")
    if in_sigma(lam) or complex(lam) == 0:
        raise SingularParameterError(lam, 0 if complex(lam) == 0 else round(1 / complex(lam).real))
    P = np.asarray(_prefix_products(_factors(complex(lam), N))[0], dtype=float)  # P[0..N]
    la_n = family.log_a_range(n, N)
    la_m = family.log_a_range(m, N)
    # terms indexed by j = 1..N-1: logA_n(j) + P(j-1)
    terms = la_n[: N - 1] + XArray.from_float(P[: N - 1])
    partial = cum_logsumexp(terms)           # entry j-1 holds the sum over 1..j
    i = np.arange(2, N + 1, dtype=float)     # row i uses the partial sum up to i-1
    logR = partial + XArray.from_float(-np.log(i) - P[2: N + 1]) - la_m[1:N]
    vals = np.concatenate(([-math.inf], logR.to_float()))  # row 1 has an empty sum
    return trend_from_log_values(vals, N)
