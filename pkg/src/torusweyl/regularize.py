r"""Singular-value regularization via a fixed bump-function calculus.

The bump psi is smooth, valued in [0, 1], identically 1 on [-1, 1] and 0
outside [-4, 4]:

    psi(t) = 1                                     |t| <= 1
    psi(t) = exp(1 - 1/(1 - ((|t|-1)/3)^2))        1 < |t| < 4
    psi(t) = 0                                     |t| >= 4

A companion psi_wide has the same shape with plateau [-4, 4] and support
[-16, 16], so psi_wide = 1 on supp psi.  A concrete bump (rather than "any
smooth cutoff") makes every computation reproducible bit for bit.

For A = U S V* the operator psi(AA*/alpha^2) U V* equals U psi((S/alpha)^2) V*,
and the regularized operator

    A + alpha psi(AA*/alpha^2) U V*

has singular values sigma_i + alpha psi(sigma_i^2/alpha^2) >= alpha, hence an
inverse of norm <= 1/alpha.  Rank counts are computed from singular-value
thresholds, never from numerically rank-deficient projectors (thresholding S
is well conditioned; thresholding eigenprojectors is not).

Singular values are kept in numpy's descending order throughout; formulas
stated elsewhere for ascending order are insensitive to the flip because only
functions of S and products like U phi(S) V* are ever consumed.
"""

from __future__ import annotations

import numpy as np

from .linops import svd
from .quantize import quantize
from .symbol import TorusSymbol

__all__ = ["bump", "bump_wide", "func_calc_of_gram", "regularized_operator",
           "regularized_inverse_residual", "small_singular_count",
           "regularized_trace_pair"]


def _bump_shape(t: np.ndarray, plateau: float, support: float) -> np.ndarray:
    t = np.abs(np.asarray(t, dtype=float))
    out = np.zeros_like(t)
    out[t <= plateau] = 1.0
    mid = (t > plateau) & (t < support)
    s = (t[mid] - plateau) / (support - plateau)
    out[mid] = np.exp(1.0 - 1.0 / (1.0 - s * s))
    return out


def bump(t):
    """psi: plateau [-1, 1], support [-4, 4]."""
    t = np.asarray(t, dtype=float)
    out = _bump_shape(t, 1.0, 4.0)
    return float(out) if out.ndim == 0 else out


def bump_wide(t):
    """psi_wide: plateau [-4, 4], support [-16, 16]; equals 1 on supp psi."""
    t = np.asarray(t, dtype=float)
    out = _bump_shape(t, 4.0, 16.0)
    return float(out) if out.ndim == 0 else out


def func_calc_of_gram(A, phi, alpha: float) -> np.ndarray:
    """phi(A A*/alpha^2) computed through the SVD as U phi(S^2/alpha^2) U*."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    f = svd(A)
    vals = phi((f.S / alpha) ** 2)
    return (f.U * vals) @ f.U.conj().T


def regularized_operator(A, alpha: float) -> np.ndarray:
    """A + alpha U psi(S^2/alpha^2) V*; every singular value becomes >= alpha."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    A = np.asarray(A, dtype=complex)
    f = svd(A)
    vals = bump((f.S / alpha) ** 2)
    return A + alpha * (f.U * vals) @ f.V.conj().T


def regularized_inverse_residual(A) -> float:
    r"""Defect of the exact exchange identity for the unit-scale regularizer:

        (1 - psi_wide(A*A)) (A + psi(AA*) U V*)^{-1}
            = (1 - psi_wide(A*A)) A* (A A* + psi(AA*))^{-1}.

    Both sides are assembled independently (two different matrix inversions)
    and the operator norm of the difference is returned; it is zero in exact
    arithmetic because (1 - psi_wide) psi == 0 on the spectrum of S^2.
    """
    A = np.asarray(A, dtype=complex)
    d = A.shape[0]
    f = svd(A)
    psi_s2 = bump(f.S ** 2)
    mask = np.eye(d) - (f.V * bump_wide(f.S ** 2)) @ f.V.conj().T
    left = mask @ np.linalg.inv(A + (f.U * psi_s2) @ f.V.conj().T)
    gram = A @ A.conj().T
    right = mask @ A.conj().T @ np.linalg.inv(gram + (f.U * psi_s2) @ f.U.conj().T)
    s = np.linalg.svd(left - right, compute_uv=False)
    return float(s[0]) if s.size else 0.0


def small_singular_count(f: TorusSymbol, N: int, alpha: float, R: float) -> int:
    """#{i : sigma_i(f_N) <= R alpha} — the rank proxy for the bump calculus."""
    if alpha <= 0 or R <= 0:
        raise ValueError("alpha and R must be positive")
    s = np.linalg.svd(quantize(f, N).matrix, compute_uv=False)
    return int(np.sum(s <= R * alpha))


def regularized_trace_pair(f: TorusSymbol, N: int, alpha: float) -> tuple[complex, complex]:
    r"""Both trace expressions at z = 0:

        tr (f_N + alpha psi(f_N f_N*/alpha^2) U V*)^{-1}     and
        tr f_N* (f_N f_N* + alpha^2 psi(f_N f_N*/alpha^2))^{-1}.

    Both operators are invertible by construction (singular values >= alpha,
    resp. eigenvalues >= min(alpha^2, sigma^2) > 0).
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    A = quantize(f, N).matrix
    fac = svd(A)
    vals = bump((fac.S / alpha) ** 2)
    reg = A + alpha * (fac.U * vals) @ fac.V.conj().T
    first = complex(np.trace(np.linalg.inv(reg)))
    gram = A @ A.conj().T
    gram_reg = gram + alpha ** 2 * (fac.U * vals) @ fac.U.conj().T
    second = complex(np.trace(A.conj().T @ np.linalg.inv(gram_reg)))
    return first, second
