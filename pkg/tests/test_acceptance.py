"""One test per acceptance criterion; each prints a single PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) or under pytest, where the
lines are repeated in the terminal summary.
"""
from __future__ import annotations

import functools
import sys
from fractions import Fraction as F
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))
from conftest import ACCEPTANCE_LINES  # noqa: E402

from cesarolab import Budget, classify, gallery  # noqa: E402
from cesarolab import dynamics as dy  # noqa: E402
from cesarolab import sections as sx  # noqa: E402
from cesarolab import spectra as sp  # noqa: E402
from cesarolab.criteria import BOUNDED, DIVERGES, FAILS, HOLDS, check  # noqa: E402

# pinned tolerances and budgets
RESOLVENT_N = 300
RESOLVENT_TOL = 1e-10
SPLIT_TOL = 1e-12
BUDGET = Budget(I_max=2 ** 14, N_max=4, M_max=8)
EVIDENCE_N = 2 ** 13
DYN_VECTORS, DYN_KMAX = 100, 64

GALLERY = [("example-1.5", {}), ("remark-3.9", {}), ("example-3.4i", {"alpha": 0.5}),
           ("example-3.4ii", {"s": 3}), ("remark-4.4", {}), ("power-series", {}),
           ("power-series", {"alpha": "log"}), ("power-series", {"alpha": "loglog"}),
           ("loglog-weights", {}), ("g1-nuclear", {})]


@functools.lru_cache(maxsize=None)
def classified(key, params=()):
    return classify(gallery(key, dict(params)), BUDGET)


def report(k: int, failures: list, detail: str):
    line = f"criterion {k}: {'PASS' if not failures else 'FAIL'} - {detail}"
    if failures:
        line += " | " + "; ".join(failures)
    ACCEPTANCE_LINES[k] = line
    print(line)
    assert not failures, line


def test_criterion_1_exact_identities():
    bad = []
    if not (sx.inverse(500) @ sx.cesaro(500)).is_identity():
        bad.append("inverse(500) cesaro(500) != I")
    for N in range(1, 26):
        if not (sx.delta(N) @ sx.delta(N)).is_identity():
            bad.append(f"delta({N})^2 != I")
    for N in range(1, 21):
        D = sx.delta(N)
        if (D @ sx.diag_reciprocal(N) @ D).max_abs_diff(sx.cesaro(N)) != 0:
            bad.append(f"delta diag delta != cesaro at N={N}")
    op = sx.diff_op(10)
    for k in range(10):
        e = [F(int(j == k)) for j in range(10)]
        if op.apply(e) != sx.inverse_formula(e):
            bad.append(f"(I-S)DS differs on e_{k + 1}")
    if not dy.range_inverse_check(50).ok:
        bad.append("range inverse N=50")
    report(1, bad, "exact rational identities, zero tolerance")


def test_criterion_2_resolvent():
    bad = []
    for mu in (2, -1, 0.4 + 0.3j, 0.25 + 0.1j):
        R = sx.resolvent(mu, RESOLVENT_N)
        res = sx.shifted_product_residual(mu, R)
        if not res <= RESOLVENT_TOL:
            bad.append(f"residual {res:.3g} at mu={mu}")
        D, E = sx.split(mu, RESOLVENT_N)
        err = sx.reconstruct(mu, D, E).max_scaled_diff(R)
        if not err <= SPLIT_TOL:
            bad.append(f"split mismatch {err:.3g} at mu={mu}")
    report(2, bad, f"N={RESOLVENT_N}, residual <= {RESOLVENT_TOL}, split <= {SPLIT_TOL} scaled by max(1, |entry|)")


def test_criterion_3_eigenvectors():
    bad = []
    for s in range(1, 13):
        u = sx.eig_dual(s)
        if sx.dual_apply(u) != [F(1, s) * v for v in u.entries]:
            bad.append(f"dual s={s}")
    C = sx.cesaro(64)
    for m in range(1, 9):
        x = sx.eig_direct(m, 64)
        if C.apply(list(x.entries)) != [F(1, m) * v for v in x.entries]:
            bad.append(f"direct m={m}")
    report(3, bad, "exact eigenvector equations, s <= 12 and m <= 8 at N = 64")


def test_criterion_4_gallery_verdicts():
    bad = []

    def want(key, params, name, status):
        got = classified(key, tuple(sorted(params.items()))).status(name)
        if got != status:
            bad.append(f"{key}: {name} = {got}, expected {status}")

    for name in ("Ginf", "Schwartz", "nuclear", "DN", "U", "CesContinuity", "DContinuity"):
        want("example-1.5", {}, name, HOLDS)
    want("remark-3.9", {}, "nuclear", HOLDS)
    want("remark-3.9", {}, "U", FAILS)
    want("example-3.4i", {"alpha": 0.5}, "Ginf2", FAILS)
    want("example-3.4i", {"alpha": 0.5}, "N", FAILS)
    for s in range(1, 7):
        want("example-3.4i", {"alpha": 0.5}, f"PointEigen({s})", HOLDS)
    want("example-3.4ii", {"s": 3}, "PointEigen(1)", HOLDS)
    want("example-3.4ii", {"s": 3}, "PointEigen(2)", HOLDS)
    want("example-3.4ii", {"s": 3}, "PointEigen(3)", FAILS)
    want("remark-4.4", {}, "nuclear", FAILS)
    want("remark-4.4", {}, "Schwartz", HOLDS)
    want("remark-4.4", {}, "L", HOLDS)

    ces = check(gallery("g1-nuclear"), "CesContinuity", BUDGET)
    at_n1 = {e["m"]: e["evidence"] for e in ces.evidence if e["n"] == 1}
    if ces.status != FAILS or set(at_n1) != set(range(2, 10)) or set(at_n1.values()) != {"fails"}:
        bad.append(f"g1-nuclear CesContinuity n=1: {ces.status}, {at_n1}")
    if check(gallery("example-1.5"), "DragilevTau(2)", BUDGET).status != HOLDS:
        bad.append("example-1.5 DragilevTau(2) does not diverge")
    report(4, bad, "gallery verdict regression at I_max=2^14, N_max=4, M_max=8")


def test_criterion_5_spectrum():
    bad = []
    expect = {"example-1.5": sp.NUCLEAR_SIGMA, "remark-3.9": sp.NUCLEAR_SIGMA,
              "remark-4.4": sp.DISK_OPEN_PLUS_ENDPOINTS, "loglog-weights": sp.DISK_CLOSED}
    for key, shape in expect.items():
        desc = sp.predict(classified(key))
        if desc.shape != shape:
            bad.append(f"{key}: {desc.shape}")
            continue
        nuclear = shape == sp.NUCLEAR_SIGMA
        checks = {"1/3": (F(1, 3), True), "0.6": (F(3, 5), not nuclear),
                  "0.5+0.5i": ((F(1, 2), F(1, 2)), shape == sp.DISK_CLOSED),
                  "0": (0, not nuclear)}
        for label, (lam, expected) in checks.items():
            if sp.contains(desc, lam) != expected:
                bad.append(f"{key}: {label} in sigma is {not expected}")
    report(5, bad, "predicted shapes and membership spot checks")


def test_criterion_6_evidence():
    bad = []
    lam = 0.5 + 0.5j
    a = sp.row_sum_evidence(gallery("remark-4.4"), lam, 1, 2, EVIDENCE_N).classification
    b = sp.row_sum_evidence(gallery("loglog-weights"), lam, 1, 2, EVIDENCE_N).classification
    if a != BOUNDED:
        bad.append(f"remark-4.4: {a}")
    if b != DIVERGES:
        bad.append(f"loglog-weights: {b}")
    report(6, bad, f"row-sum evidence at 0.5+0.5i, N=2^13 ({a} / {b})")


def test_criterion_7_dynamics():
    bad = []
    rng = np.random.default_rng(20240601)
    for key, n, N in (("remark-3.9", 1, 64), ("remark-4.4", 100, 1024)):
        fam = gallery(key)
        worst = 0
        for _ in range(DYN_VECTORS):
            r = rng.uniform(0, 1, N) * np.exp(2j * np.pi * rng.uniform(0, 1, N))
            worst = max(worst, dy.power_bound_check(fam, n, r, DYN_KMAX).bound_violations)
        if worst:
            bad.append(f"{key}: {worst} violations")
    e1 = np.zeros(64)
    e1[0] = 1
    means = dy.cesaro_means(gallery("remark-3.9"), 1, e1, [2 ** k for k in range(4, 12)])
    if not means.halving_ok:
        bad.append("halving criterion not met")
    if not dy.fixed_point_exact(64):
        bad.append("C 1 != 1")
    report(7, bad, f"{DYN_VECTORS} seeded vectors, k <= {DYN_KMAX}; halving; exact fixed point")


def test_criterion_8_consistency():
    bad = []
    for key, params in GALLERY:
        cls = classified(key, tuple(sorted(params.items())))
        if cls.inconsistencies:
            bad.append(f"{cls.family}: {cls.inconsistencies}")
    report(8, bad, f"no equivalence violations across {len(GALLERY)} gallery families")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
