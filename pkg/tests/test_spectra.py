from fractions import Fraction as F

import numpy as np
import pytest

from cesarolab import classify, gallery
from cesarolab.criteria import BOUNDED, CONVERGES, DIVERGES, ZERO
from cesarolab.spectra import (BOUNDARY_IN, BOUNDARY_OUT, DISK_CLOSED, DISK_OPEN_PLUS_ENDPOINTS,
                               INSIDE, NUCLEAR_SIGMA, OUTSIDE, InsufficientClassification,
                               SpectrumDescription, contains, member, predict, row_sum_evidence)

NUC = SpectrumDescription(NUCLEAR_SIGMA, "")
OPEN = SpectrumDescription(DISK_OPEN_PLUS_ENDPOINTS, "")
CLOSED = SpectrumDescription(DISK_CLOSED, "")


def test_member_examples():
    assert member(NUC, F(1, 3)) == INSIDE and member(NUC, 0.3) == OUTSIDE
    assert member(OPEN, 0.5 + 0.5j) == BOUNDARY_OUT
    assert member(CLOSED, 0.5 + 0.5j) == BOUNDARY_IN
    assert member(CLOSED, 0.6) == INSIDE
    assert member(OPEN, 0) == BOUNDARY_IN and member(OPEN, 1) == BOUNDARY_IN
    assert member(OPEN, 1.5) == OUTSIDE


def test_sandwich_on_rational_points():
    pts = [F(p, q) for q in range(1, 12) for p in range(-3, 14)]
    sigma = [F(1, m) for m in range(1, 30)]
    for desc in (NUC, OPEN, CLOSED):
        assert all(contains(desc, s) for s in sigma)
        for z in pts:
            if contains(desc, z) and z != 0:
                assert 1 / z >= 1           # inside the closed unit-disk image
    assert not contains(NUC, 0) and contains(OPEN, 0) and contains(CLOSED, 0)


@pytest.mark.parametrize("desc", [NUC, OPEN, CLOSED])
def test_conjugate_invariance(desc):
    rng = np.random.default_rng(3)
    for z in rng.normal(0.5, 0.6, 200) + 1j * rng.normal(0, 0.6, 200):
        assert member(desc, z) == member(desc, z.conjugate())


def test_boundary_walk():
    for t in np.linspace(-5, 5, 41):
        lam = 1 / (1 + 1j * t)
        assert member(CLOSED, lam) == BOUNDARY_IN
        if t != 0:
            assert member(OPEN, lam) == BOUNDARY_OUT


def test_harmonic_bounds():
    i = np.arange(2, 2 ** 16 + 1)
    h = np.cumsum(1.0 / np.arange(1, 2 ** 16))       # h[k] = sum_{j<=k+1} 1/j
    assert np.all(np.log(i) <= h[i - 2]) and np.all(h[i - 2] <= 1 + np.log(i - 1))


def test_predictions():
    assert predict(classify(gallery("remark-3.9"))).shape == NUCLEAR_SIGMA
    assert predict(classify(gallery("remark-4.4"))).shape == DISK_OPEN_PLUS_ENDPOINTS
    assert predict(classify(gallery("loglog-weights"))).shape == DISK_CLOSED
    d = predict(classify(gallery("example-1.5"))).to_dict()
    assert d["shape"] == NUCLEAR_SIGMA and "0" in d["sigma_star"]
    assert predict(classify(gallery("remark-4.4"))).to_dict()["sigma_star"] == "not specified"


def test_insufficient_classification():
    with pytest.raises(InsufficientClassification):
        predict(classify(gallery("example-3.4ii", s=3)))


def test_row_sum_evidence():
    bounded = {ZERO, CONVERGES, BOUNDED}
    assert row_sum_evidence(gallery("remark-4.4"), 0.5 + 0.5j, 1, 2, 2 ** 13).classification == BOUNDED
    assert row_sum_evidence(gallery("loglog-weights"), 0.5 + 0.5j, 1, 2, 2 ** 13).classification == DIVERGES
    assert row_sum_evidence(gallery("example-1.5"), 0.25 + 0.1j, 1, 2, 2 ** 10).classification in bounded
    with pytest.raises(ValueError):
        row_sum_evidence(gallery("remark-4.4"), 0.5 + 0.5j, 1, 2, 1000)
