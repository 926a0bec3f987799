"""Finite lower-triangular sections of the Cesàro matrix and its relatives.

Because every matrix here is lower triangular, the N-section of a product is
the product of the N-sections, so identities between infinite matrices can
be checked exactly at any finite size.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

EXACT = "exact"
DOUBLE = "double"
_KINDS = (EXACT, DOUBLE)
_SAFE_LOW, _SAFE_HIGH = 1e-300, 1e300


class SingularParameterError(ValueError):
    """The resolvent parameter makes some factor ``1 - 1/(k mu)`` vanish."""

    def __init__(self, mu, k):
        self.mu = mu
        self.k = k
        if k == 0:
            super().__init__(f"mu = {mu} is 0, where the resolvent formula is undefined")
        else:
            super().__init__(f"mu = {mu} is singular: 1 - 1/(k mu) = 0 at k = {k}")


@dataclass(frozen=True, eq=False)
class TriMatrix:
    """An N x N lower-triangular matrix over exact rationals or complex doubles."""

    N: int
    kind: str
    entries: np.ndarray
    recipe: str

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}")
        if self.entries.shape != (self.N, self.N):
            raise ValueError("entries must be N x N")
        upper = np.triu_indices(self.N, 1)
        if np.any(self.entries[upper] != 0):
            raise ValueError("TriMatrix entries must vanish above the diagonal")

    def __getitem__(self, ij):
        """1-based entry access ``M[i, j]``."""
        i, j = ij
        return self.entries[i - 1, j - 1]

    def row_support(self, i0: int) -> list:
        """0-based column indices of nonzero entries in 0-based row ``i0``."""
        row = self.entries[i0, : i0 + 1]
        return [k for k in range(i0 + 1) if row[k] != 0]

    def __matmul__(self, other: "TriMatrix") -> "TriMatrix":
        if not isinstance(other, TriMatrix):
            return self.apply(other)
        if other.N != self.N or other.kind != self.kind:
            raise ValueError("matmul needs matching size and kind")
        recipe = f"({self.recipe})*({other.recipe})"
        if self.kind == DOUBLE:
            return TriMatrix(self.N, DOUBLE, np.tril(self.entries @ other.entries), recipe)
        out = _zeros(self.N, EXACT)
        # row i of the product only touches rows k <= i of ``other`` where self[i,k] != 0
        for i in range(self.N):
            acc = out[i, : i + 1]
            for k in self.row_support(i):
                acc = acc + self.entries[i, k] * np.concatenate(
                    (other.entries[k, : k + 1], np.zeros(i - k, dtype=object)))
            out[i, : i + 1] = acc
        return TriMatrix(self.N, EXACT, out, recipe)

    def __sub__(self, other: "TriMatrix") -> "TriMatrix":
        return TriMatrix(self.N, self.kind, self.entries - other.entries,
                         f"({self.recipe})-({other.recipe})")

    def shift(self, mu) -> "TriMatrix":
        """``self - mu I``."""
        e = self.entries.copy()
        idx = np.arange(self.N)
        e[idx, idx] = e[idx, idx] - mu
        return TriMatrix(self.N, self.kind, e, f"{self.recipe}-({mu})I")

    def apply(self, x):
        x = list(x)
        if len(x) != self.N:
            raise ValueError(f"vector length {len(x)} does not match N = {self.N}")
        if self.kind == EXACT:
            return [sum((self.entries[i, k] * x[k] for k in self.row_support(i)), Fraction(0))
                    for i in range(self.N)]
        return self.entries @ np.asarray(x, dtype=complex)

    def to_double(self) -> "TriMatrix":
        if self.kind == DOUBLE:
            return self
        vals = np.array([[complex(float(v)) for v in row] for row in self.entries],
                        dtype=complex)
        return TriMatrix(self.N, DOUBLE, vals, self.recipe)

    def is_identity(self) -> bool:
        if self.kind == EXACT:
            eye = _identity_entries(self.N, EXACT)
            return bool(np.all(self.entries == eye))
        return bool(np.all(self.entries == np.eye(self.N)))

    def max_abs_diff(self, other: "TriMatrix") -> float:
        a, b = self.to_double().entries, other.to_double().entries
        return float(np.max(np.abs(a - b))) if self.N else 0.0

    def max_scaled_diff(self, other: "TriMatrix") -> float:
        """Largest ``|a - b| / max(1, |b|)``: absolute for small entries, relative for large."""
        a, b = self.to_double().entries, other.to_double().entries
        return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b)))) if self.N else 0.0

    def diagonal(self):
        return [self.entries[i, i] for i in range(self.N)]

    # export ---------------------------------------------------------------
    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for row in self.entries:
            w.writerow([_fmt(v, self.kind) for v in row])
        return buf.getvalue()

    def to_json_obj(self) -> dict:
        items = []
        for i in range(self.N):
            for j in range(i + 1):
                v = self.entries[i, j]
                if v == 0:
                    continue
                if self.kind == EXACT:
                    items.append([i + 1, j + 1, _fmt(v, EXACT), "0"])
                else:
                    items.append([i + 1, j + 1, float(v.real), float(v.imag)])
        return {"N": self.N, "kind": self.kind, "recipe": self.recipe, "entries": items}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)


def _fmt(v, kind):
    if kind == EXACT:
        v = Fraction(v)
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    v = complex(v)
    return repr(v.real) if v.imag == 0 else f"{v.real!r}{v.imag:+}j"


def _zeros(N, kind):
    if kind == EXACT:
        out = np.empty((N, N), dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros((N, N), dtype=complex)


def _identity_entries(N, kind):
    e = _zeros(N, kind)
    for i in range(N):
        e[i, i] = Fraction(1) if kind == EXACT else 1.0
    return e


def _check(N, kind):
    if int(N) != N or N < 1:
        raise ValueError(f"N must be a positive integer, got {N}")
    if kind not in _KINDS:
        raise ValueError(f"kind must be one of {_KINDS}")


def _finish(e, N, kind, recipe):
    t = TriMatrix(N, EXACT, e, recipe)
    return t if kind == EXACT else t.to_double()


# ------------------------------------------------------------ builders

def identity(N: int, kind: str = EXACT) -> TriMatrix:
    _check(N, kind)
    return TriMatrix(N, kind, _identity_entries(N, kind), "identity")


def cesaro(N: int, kind: str = EXACT) -> TriMatrix:
    """``c_ij = 1/i`` for ``j <= i``."""
    _check(N, kind)
    e = _zeros(N, EXACT)
    for i in range(N):
        e[i, : i + 1] = Fraction(1, i + 1)
    return _finish(e, N, kind, "cesaro")


def inverse(N: int, kind: str = EXACT) -> TriMatrix:
    """Bidiagonal inverse: ``i`` on the diagonal, ``-(i-1)`` below it."""
    _check(N, kind)
    e = _zeros(N, EXACT)
    for i in range(N):
        e[i, i] = Fraction(i + 1)
        if i:
            e[i, i - 1] = Fraction(-i)
    return _finish(e, N, kind, "cesaro_inverse")


def right_shift(N: int, kind: str = EXACT) -> TriMatrix:
    _check(N, kind)
    e = _zeros(N, EXACT)
    for i in range(1, N):
        e[i, i - 1] = Fraction(1)
    return _finish(e, N, kind, "right_shift")


def diag_reciprocal(N: int, kind: str = EXACT) -> TriMatrix:
    """``diag(1, 1/2, ..., 1/N)``."""
    _check(N, kind)
    e = _zeros(N, EXACT)
    for i in range(N):
        e[i, i] = Fraction(1, i + 1)
    return _finish(e, N, kind, "diag_reciprocal")


def delta(N: int, kind: str = EXACT) -> TriMatrix:
    """Alternating binomials ``(-1)^(j-1) binom(i-1, j-1)`` for ``j <= i``."""
    _check(N, kind)
    e = _zeros(N, EXACT)
    for i in range(N):
        for j in range(i + 1):
            e[i, j] = Fraction((-1) ** j * comb(i, j))
    return _finish(e, N, kind, "delta")


# -------------------------------------------------- differentiation

def diff_apply(x) -> list:
    """``(Dx)_i = i x_{i+1}`` on a finite vector; the result is one shorter."""
    x = [Fraction(v) for v in x]
    return [(i + 1) * x[i + 1] for i in range(len(x) - 1)]


class DiffComposition:
    """``(I - S_r) D S_r`` on length-N vectors.

    The intermediate shifted vector carries one extra coordinate so the
    truncation never reaches the N entries that are returned.
    """

    def __init__(self, N: int):
        _check(N, EXACT)
        self.N = N

    def apply(self, x) -> list:
        x = [Fraction(v) for v in x]
        if len(x) != self.N:
            raise ValueError(f"vector length {len(x)} does not match N = {self.N}")
        shifted = [Fraction(0)] + x               # S_r x, length N + 1
        z = diff_apply(shifted)                   # length N, nothing truncated
        return [z[i] - (z[i - 1] if i else 0) for i in range(self.N)]


def diff_op(N: int) -> DiffComposition:
    """The composition ``(I - S_r) D S_r`` as a vector operator of size N."""
    return DiffComposition(N)


def inverse_formula(x) -> list:
    """``i x_i - (i-1) x_{i-1}`` evaluated directly."""
    x = [Fraction(v) for v in x]
    return [(i + 1) * x[i] - (i * x[i - 1] if i else 0) for i in range(len(x))]


# -------------------------------------------------------- resolvent

def _factors(mu, N):
    """Factors ``1 - 1/(k mu)`` for ``k = 1..N`` in extended precision."""
    mu_c = complex(mu)
    if mu_c == 0:
        raise SingularParameterError(mu, 0)
    k = np.arange(1, N + 1)
    f = np.clongdouble(1) - np.clongdouble(1) / (k.astype(np.longdouble) * np.clongdouble(mu_c))
    # exact test: 1/(k mu) = 1 iff mu = 1/k
    if mu_c.imag == 0 and mu_c.real > 0:
        inv = 1.0 / mu_c.real
        if abs(inv - round(inv)) == 0 and 1 <= round(inv) <= N:
            raise SingularParameterError(mu, int(round(inv)))
    zero = np.flatnonzero(f == 0)
    if len(zero):
        raise SingularParameterError(mu, int(zero[0]) + 1)
    return f


def _prefix_products(f):
    """Prefix products ``F_0 = 1, F_i = f_1...f_i`` as (log-modulus, phase) and direct form."""
    logmod = np.concatenate(([np.longdouble(0)], np.cumsum(np.log(np.abs(f)))))
    phase = np.concatenate(([np.longdouble(0)], np.cumsum(np.angle(f))))
    return logmod, phase


def log_factor_modulus(mu, N) -> np.ndarray:
    """``P(i) = sum_{k<=i} log|1 - 1/(k mu)|`` for ``i = 0..N`` (float)."""
    logmod, _ = _prefix_products(_factors(mu, N))
    return logmod.astype(float)


def _range_products(mu, N):
    """``Q[i, j] = prod_{k=j}^{i} (1 - 1/(k mu))`` for ``j <= i`` (1-based, as clongdouble)."""
    f = _factors(mu, N)
    logmod, phase = _prefix_products(f)
    direct = np.concatenate(([np.clongdouble(1)], np.cumprod(f)))
    mods = np.abs(direct[1:])
    Q = np.zeros((N, N), dtype=np.clongdouble)
    if np.all((mods > _SAFE_LOW) & (mods < _SAFE_HIGH)):
        for i in range(N):
            Q[i, : i + 1] = direct[i + 1] / direct[: i + 1]
    else:
        for i in range(N):
            lm = logmod[i + 1] - logmod[: i + 1]
            ph = phase[i + 1] - phase[: i + 1]
            Q[i, : i + 1] = np.exp(lm) * (np.cos(ph) + 1j * np.sin(ph))
    return Q


def _resolvent_ld(mu, N):
    Q = _range_products(mu, N)
    mu_ld = np.clongdouble(complex(mu))
    i = np.arange(1, N + 1).astype(np.longdouble)[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        R = -np.clongdouble(1) / (i * mu_ld * mu_ld * Q)
    R = np.tril(np.where(Q == 0, 0, R), -1)
    diag = np.clongdouble(1) / (np.clongdouble(1) / np.arange(1, N + 1).astype(np.longdouble) - mu_ld)
    R[np.arange(N), np.arange(N)] = diag
    return R


def resolvent(mu, N: int) -> TriMatrix:
    """Finite section of ``(C - mu I)^{-1}`` from its closed-form entries.

    Products are formed in extended precision (long double) and the result is
    rounded to complex doubles.
    """
    _check(N, DOUBLE)
    R = _resolvent_ld(mu, N)
    return TriMatrix(N, DOUBLE, R.astype(complex), f"resolvent({complex(mu)})")


def shifted_product_residual(mu, R: TriMatrix) -> float:
    """``max |(C - mu I) R - I|`` for a double-kind section, summed in long double.

    Uses ``((C - mu I) R)_ij = (sum_{k=j}^{i} R_kj)/i - mu R_ij``.
    """
    N = R.N
    Rl = R.entries.astype(np.clongdouble)
    S = np.cumsum(Rl, axis=0)
    i = np.arange(1, N + 1).astype(np.longdouble)[:, None]
    res = np.tril(S / i) - np.clongdouble(complex(mu)) * Rl
    res[np.arange(N), np.arange(N)] -= 1
    return float(np.max(np.abs(res)))


def split(mu, N: int) -> tuple[TriMatrix, TriMatrix]:
    """Diagonal part ``D_mu`` and strictly lower part ``E_mu`` with ``R = D_mu - mu^-2 E_mu``.

    ``e_ij = 1/(i prod_{k=j}^{i}(1 - 1/(k mu)))`` for ``1 <= j < i``.
    """
    _check(N, DOUBLE)
    Q = _range_products(mu, N)
    i = np.arange(1, N + 1).astype(np.longdouble)[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        E = np.clongdouble(1) / (i * Q)
    E = np.tril(np.where(Q == 0, 0, E), -1)
    D = np.zeros((N, N), dtype=np.clongdouble)
    mu_ld = np.clongdouble(complex(mu))
    D[np.arange(N), np.arange(N)] = np.clongdouble(1) / (
        np.clongdouble(1) / np.arange(1, N + 1).astype(np.longdouble) - mu_ld)
    return (TriMatrix(N, DOUBLE, D.astype(complex), f"split_D({complex(mu)})"),
            TriMatrix(N, DOUBLE, E.astype(complex), f"split_E({complex(mu)})"))


def reconstruct(mu, D: TriMatrix, E: TriMatrix) -> TriMatrix:
    mu = complex(mu)
    return TriMatrix(D.N, DOUBLE, D.entries - E.entries / (mu * mu), f"reconstruct({mu})")


# ------------------------------------------------------ eigenvectors

@dataclass(frozen=True)
class EigVec:
    entries: tuple
    eigenvalue: Fraction
    side: str  # "direct" or "dual"

    def __len__(self):
        return len(self.entries)


def eig_direct(m: int, N: int) -> EigVec:
    """Exact eigenvector of the N-section of C for ``1/m``, first nonzero entry 1.

    Entries below index m vanish; beyond it ``x_i = S_{i-1}/(i/m - 1)`` with
    ``S`` the running sum.
    """
    if int(m) != m or m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    _check(N, EXACT)
    if m == 1:
        return EigVec(tuple(Fraction(1) for _ in range(N)), Fraction(1), "direct")
    x = [Fraction(0)] * N
    if m <= N:
        x[m - 1] = Fraction(1)
        s = Fraction(1)
        for i in range(m + 1, N + 1):
            x[i - 1] = s / (Fraction(i, m) - 1)
            s += x[i - 1]
    return EigVec(tuple(x), Fraction(1, m), "direct")


def eig_dual(s: int) -> EigVec:
    """``u_i = prod_{j<i} (1 - s/j)`` for ``i <= s``; zero beyond, so only s entries are stored."""
    if int(s) != s or s < 1:
        raise ValueError(f"s must be a positive integer, got {s}")
    u = []
    p = Fraction(1)
    for i in range(1, s + 1):
        u.append(p)
        p *= 1 - Fraction(s, i)
    return EigVec(tuple(u), Fraction(1, s), "dual")


def dual_apply(y) -> list:
    """``(C'y)_i = sum_{j>=i} y_j / j`` for a finitely supported ``y`` given as a finite list."""
    if isinstance(y, EigVec):
        y = y.entries
    if not hasattr(y, "__len__"):
        raise TypeError("dual_apply needs a finite sequence (finitely supported input)")
    y = [Fraction(v) for v in y]
    out = [Fraction(0)] * len(y)
    acc = Fraction(0)
    for j in range(len(y), 0, -1):
        acc += y[j - 1] / j
        out[j - 1] = acc
    return out


def cesaro_apply(x) -> list:
    """``(Cx)_i = (x_1 + ... + x_i)/i`` exactly."""
    out, acc = [], Fraction(0)
    for i, v in enumerate(x, start=1):
        acc += Fraction(v)
        out.append(acc / i)
    return out
