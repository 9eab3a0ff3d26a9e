r"""Toeplitz/Weyl quantization of band-limited torus observables.

A symbol f on T^{2n} acts on the N^n-dimensional quantum space (h = 1/(2 pi N))
through the matrix F with entries

    F[m, j] = sum_{l, r} fhat(l, j - m - rN) (-1)^{<r, l>} exp(pi i <j + m, l> / N),

rows and columns indexed by j in (Z/NZ)^n enumerated lexicographically with
representatives 0..N-1.  Because the symbol is band-limited the (l, r) sum is
finite: for every stored Fourier index (l, mu) and every column j there is
exactly one row m = (j - mu) mod N and one integer vector r = (j - mu - m)/N,
so each coefficient contributes one entry per column (for truncation radius
L < N this is the "at most one r per coordinate" regime; larger L is handled
by the same bookkeeping since the sum runs over stored indices).

Specializations recovered exactly:
    * x-only symbols give diag(f(j/N));
    * xi-only symbols give Fdft* diag(g(k/N)) Fdft with the DFT of
      ``dft_matrix`` (entries exp(-2 pi i <j,j'>/N) / N^{n/2});
    * real symbols give Hermitian matrices;
    * f == c gives c * Identity.

Everything here is a pure function of its arguments; results are
deterministic and independent of any parallel schedule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .symbol import TorusSymbol, symbol_digest

__all__ = ["MAX_MATRIX_DIM", "QuantizedOperator", "quantize", "dft_matrix", "trace_formula"]

# dense desk-scale envelope: refuse to build anything larger
MAX_MATRIX_DIM = 2048


@dataclass
class QuantizedOperator:
    """Dense N^n x N^n matrix together with its (N, n) metadata."""

    N: int
    n: int
    matrix: np.ndarray
    symbol_id: str | None = None

    @property
    def dim(self) -> int:
        return self.N ** self.n

    @property
    def planck_h(self) -> float:
        return 1.0 / (2.0 * np.pi * self.N)


def _lattice(N: int, n: int) -> np.ndarray:
    """All j in (Z/NZ)^n, shape (N^n, n), lexicographic order."""
    return np.indices((N,) * n).reshape(n, -1).T


def _check_dim(N: int, n: int) -> int:
    if N < 1:
        raise ValueError("N must be >= 1")
    dim = N ** n
    if dim > MAX_MATRIX_DIM:
        raise ValueError(
            f"matrix dimension N^n = {dim} exceeds the supported dense envelope "
            f"{MAX_MATRIX_DIM} (desk scale)")
    return dim


def quantize(f: TorusSymbol, N: int) -> QuantizedOperator:
    """Build the matrix of f acting on the N^n-dimensional quantum space."""
    dim = _check_dim(N, f.n)
    J = _lattice(N, f.n)
    cols = np.arange(dim)
    F = np.zeros((dim, dim), dtype=complex)
    for (l, mu), c in f.coeffs.items():
        lv = np.asarray(l)
        muv = np.asarray(mu)
        M = (J - muv) % N
        r = (J - muv - M) // N
        rows = np.ravel_multi_index(tuple(M.T), (N,) * f.n) if f.n > 1 else M[:, 0]
        sign = np.where((r @ lv) % 2 == 0, 1.0, -1.0)
        phase = np.exp(1j * np.pi * ((J + M) @ lv) / N)
        F[rows, cols] += c * sign * phase
    return QuantizedOperator(N=N, n=f.n, matrix=F, symbol_id=symbol_digest(f))


def dft_matrix(N: int, n: int = 1) -> np.ndarray:
    """Unitary DFT on (Z/NZ)^n: entries exp(-2 pi i <j, j'>/N) / N^{n/2}."""
    _check_dim(N, n)
    J = _lattice(N, n)
    return np.exp(-2j * np.pi * (J @ J.T) / N) / N ** (n / 2.0)


def trace_formula(f: TorusSymbol, N: int) -> complex:
    """Exact lattice-sum trace of quantize(f, N):

        tr = N^n sum_{l,m} (-1)^{N <l, m>} fhat(N l, N m),

    the sum running over stored indices divisible by N.  For band-limited f
    with truncation radius < N only (0, 0) survives, giving N^n fhat(0, 0),
    i.e. N^n times the mean of f.
    """
    total = 0j
    for (l, m), c in f.coeffs.items():
        if any(v % N for v in l) or any(v % N for v in m):
            continue
        lq = [v // N for v in l]
        mq = [v // N for v in m]
        sign = -1.0 if (N * sum(a * b for a, b in zip(lq, mq))) % 2 else 1.0
        total += sign * c
    return complex(total * N ** f.n)
