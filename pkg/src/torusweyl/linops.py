"""Dense linear-algebra plumbing: eigenvalues, SVD, norms.

Thin wrappers over LAPACK via numpy.  Deterministic for fixed input bits; any
eigensolver non-convergence surfaces as NumericalError, never silently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["NumericalError", "SvdFactorization", "svd", "eigenvalues",
           "sigma_min", "op_norm", "hs_norm"]


class NumericalError(RuntimeError):
    """Dense solver failed to converge or produced non-finite output."""


@dataclass
class SvdFactorization:
    """A = U @ diag(S) @ V.conj().T with S sorted descending, entries >= 0.

    For degenerate S the factorization is not unique; consumers must use only
    functions of S or product expressions like U phi(S) V*.
    """

    U: np.ndarray
    S: np.ndarray
    V: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.U * self.S) @ self.V.conj().T


def svd(A) -> SvdFactorization:
    A = np.asarray(A, dtype=complex)
    try:
        U, S, Vh = np.linalg.svd(A)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails here
        raise NumericalError(f"SVD did not converge: {exc}") from exc
    return SvdFactorization(U=U, S=S, V=Vh.conj().T)


def eigenvalues(A) -> np.ndarray:
    """All eigenvalues with multiplicity, sorted by (Re, Im) for determinism."""
    A = np.asarray(A, dtype=complex)
    if not np.all(np.isfinite(A)):
        raise NumericalError("matrix has non-finite entries")
    try:
        ev = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue solver did not converge: {exc}") from exc
    return np.sort_complex(ev)


def sigma_min(A) -> float:
    """Smallest singular value; equals 1/||A^{-1}|| when A is invertible."""
    s = np.linalg.svd(np.asarray(A, dtype=complex), compute_uv=False)
    return float(s[-1])


def op_norm(A) -> float:
    """Operator (spectral) norm: the largest singular value."""
    s = np.linalg.svd(np.asarray(A, dtype=complex), compute_uv=False)
    return float(s[0])


def hs_norm(A) -> float:
    """Hilbert-Schmidt / Frobenius norm, ||A||^2 = tr A* A."""
    return float(np.linalg.norm(np.asarray(A), "fro"))
