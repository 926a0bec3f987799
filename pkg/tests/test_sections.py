from fractions import Fraction as F

import numpy as np
import pytest

from cesarolab import sections as sx


def test_small_matrices():
    c = sx.cesaro(2)
    assert [[c[1, 1], c[1, 2]], [c[2, 1], c[2, 2]]] == [[1, 0], [F(1, 2), F(1, 2)]]
    d = sx.delta(3)
    assert [d[3, j] for j in (1, 2, 3)] == [1, -2, 1]
    assert [d[2, 1], d[2, 2]] == [1, -1]
    assert sx.inverse(3)[3, 2] == -2 and sx.inverse(3)[3, 3] == 3


@pytest.mark.parametrize("N", [1, 3, 17])
def test_triangular_identities(N):
    assert (sx.inverse(N) @ sx.cesaro(N)).is_identity()
    assert (sx.delta(N) @ sx.delta(N)).is_identity()
    D = sx.delta(N)
    assert (D @ sx.diag_reciprocal(N) @ D).max_abs_diff(sx.cesaro(N)) == 0


def test_diff_composition_matches_inverse():
    op = sx.diff_op(10)
    for k in range(10):
        e = [F(int(j == k)) for j in range(10)]
        assert op.apply(e) == sx.inverse_formula(e) == sx.inverse(10).apply(e)


def test_upper_entries_rejected():
    e = np.zeros((2, 2), dtype=complex)
    e[0, 1] = 1
    with pytest.raises(ValueError):
        sx.TriMatrix(2, sx.DOUBLE, e, "bad")


def test_resolvent_small():
    R = sx.resolvent(2, 2)
    assert np.allclose([[R[1, 1], R[1, 2]], [R[2, 1], R[2, 2]]], [[-1, 0], [-1 / 3, -2 / 3]])
    D, E = sx.split(2, 2)
    assert np.allclose([D[1, 1], D[2, 2]], [-1, -2 / 3]) and E[2, 1] == pytest.approx(4 / 3)


@pytest.mark.parametrize("mu", [2, -1, 0.4 + 0.3j, 0.25 + 0.1j])
def test_resolvent_residual(mu):
    R = sx.resolvent(mu, 120)
    assert sx.shifted_product_residual(mu, R) <= 1e-10


@pytest.mark.parametrize("mu", [1, 0.5, F(1, 3), 0])
def test_singular_parameters(mu):
    with pytest.raises(sx.SingularParameterError):
        sx.resolvent(mu, 5)


def test_boundary_bounds_on_e_entries():
    lam = 0.5 + 0.5j
    _, E = sx.split(lam, 512)
    vals = [j * abs(E[i, j]) for i in range(3, 513, 17) for j in range(2, i)]
    assert np.isfinite(max(vals)) and np.isfinite(max(1 / v for v in vals))


def test_eigenvectors():
    assert sx.eig_direct(2, 6).entries == tuple(F(k) for k in range(6))
    assert list(sx.eig_direct(1, 5).entries) == [1] * 5
    u = sx.eig_dual(2)
    assert list(u.entries) == [1, -1]
    assert sx.dual_apply(u) == [F(1, 2), F(-1, 2)]
    assert sx.dual_apply([0, 0, 1]) == [F(1, 3)] * 3
    assert sx.dual_apply([1]) == [1]
    with pytest.raises(TypeError):
        sx.dual_apply(iter([1, 2]))


def test_export_formats():
    m = sx.cesaro(2)
    obj = m.to_json_obj()
    assert obj["N"] == 2 and [2, 1, "1/2", "0"] in obj["entries"]
    assert m.to_csv().splitlines() == ["1,0", "1/2,1/2"]
