from fractions import Fraction as F

import numpy as np
import pytest

from cesarolab import gallery
from cesarolab.dynamics import (TruncationGuardError, apply_cesaro, cesaro_means, decompose,
                                fixed_point_exact, power_bound_check, range_inverse_check,
                                range_inverse_matrix, range_inverse_row_bound)


def test_fixed_point():
    assert fixed_point_exact(40)
    fam = gallery("remark-3.9")
    r = power_bound_check(fam, 1, np.ones(64), 8)
    assert r.bound_violations == 0 and np.allclose(r.norm_ratios, 1.0)


def _decay(N):
    return np.exp(-np.arange(N, dtype=float) ** 1.2)


def test_e1_iterates():
    y = apply_cesaro([1, 0, 0, 0])
    assert np.allclose(y, [1, 1 / 2, 1 / 3, 1 / 4])


def test_random_vectors_power_bounded():
    fam = gallery("remark-3.9")
    rng = np.random.default_rng(0)
    for _ in range(20):
        x = (rng.uniform(-1, 1, 64) + 1j * rng.uniform(-1, 1, 64)) * _decay(64)
        assert power_bound_check(fam, 1, x, 64).bound_violations == 0


def test_guard_rejects_short_vectors():
    with pytest.raises(TruncationGuardError):
        power_bound_check(gallery("remark-4.4"), 1, np.ones(16), 4)


def test_cesaro_means():
    fam = gallery("remark-3.9")
    e1 = np.zeros(64)
    e1[0] = 1
    r = cesaro_means(fam, 1, e1, [2 ** k for k in range(4, 12)])
    assert r.halving_ok and r.eventually_decreasing and r.bound_violations == 0
    z = _decay(64)
    z[0] = 0
    r0 = cesaro_means(fam, 1, z, [16, 64, 256])
    assert r0.distances[-1] < r0.distances[0]


def test_decompose():
    fixed, rest = decompose([3, 1, F(1, 2)])
    assert fixed == [3, 3, 3] and rest[0] == 0
    assert [a + b for a, b in zip(fixed, rest)] == [3, 1, F(1, 2)]


def test_range_inverse():
    assert range_inverse_check(2).ok and range_inverse_check(30).ok
    B = range_inverse_matrix(3)
    assert B[3, 1] == 1 and B[3, 2] == F(1, 2) and B[3, 3] == F(4, 3)
    assert range_inverse_row_bound(gallery("remark-4.4"), 1, 2, 512)["ok"]
