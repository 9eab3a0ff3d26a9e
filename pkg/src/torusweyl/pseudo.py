r"""Pseudospectral diagnostics for quantized observables.

The portrait stores sigma_min(f_N - z) on a rectangular z-grid, i.e. the
reciprocal of the resolvent norm.  A negative Poisson bracket {Re f, Im f}(w)
forces sigma_min(f_N - f(w)) to decay faster than any power of 1/N, which is
the mechanism behind spectral instability; the probe below checks a
conservative fixed-doubling proxy for that decay (a factor >= 8 from N = 64
to N = 128) rather than an asymptotic rate with unknown constants.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .quantize import quantize
from .symbol import TorusPoint, TorusSymbol, poisson_bracket

__all__ = ["ZGrid", "PortraitGrid", "bracket_sign_map", "sigma_min_grid",
           "resolvent_growth_probe"]


@dataclass(frozen=True)
class ZGrid:
    """Rectangular complex grid: corners and per-axis resolution."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    n_re: int
    n_im: int

    def __post_init__(self):
        if self.re_max <= self.re_min or self.im_max <= self.im_min:
            raise ValueError("grid corners must be ordered")
        if self.n_re < 2 or self.n_im < 2:
            raise ValueError("need at least 2 nodes per axis")

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return (np.linspace(self.re_min, self.re_max, self.n_re),
                np.linspace(self.im_min, self.im_max, self.n_im))

    @classmethod
    def square(cls, half_width: float = 1.6, nodes: int = 161) -> "ZGrid":
        """Default portrait window, [-1.6, 1.6]^2 at 161 x 161 nodes."""
        return cls(-half_width, half_width, -half_width, half_width, nodes, nodes)


@dataclass
class PortraitGrid:
    """values[i_im, i_re] = sigma_min(f_N - z) at z = res[i_re] + i ims[i_im]."""

    grid: ZGrid
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.grid.n_im, self.grid.n_re):
            raise ValueError("values shape does not match grid resolution")
        if np.any(self.values < 0):
            raise ValueError("sigma_min values must be nonnegative")


def bracket_sign_map(f: TorusSymbol, grid_m: int) -> np.ndarray:
    """{Re f, Im f} evaluated on the M x M corner grid (j/M, k/M).

    Corner nodes (rather than midpoints) keep dyadic probe points such as
    (1/8, 1/8) exactly on the grid.
    """
    if f.n != 1:
        raise PreconditionError("bracket sign maps are 1-dimensional (portrait use)")
    br = poisson_bracket(f.real_part(), f.imag_part())
    axis = np.arange(grid_m) / grid_m
    x = np.repeat(axis, grid_m)
    xi = np.tile(axis, grid_m)
    vals = br.eval_points(x, xi).real
    return vals.reshape(grid_m, grid_m)


def sigma_min_grid(f: TorusSymbol, N: int, z_grid: ZGrid) -> PortraitGrid:
    """Pseudospectrum portrait: smallest singular value of f_N - z per node."""
    A = quantize(f, N).matrix
    eye = np.eye(A.shape[0])
    res, ims = z_grid.axes()
    values = np.empty((z_grid.n_im, z_grid.n_re))
    for i, b in enumerate(ims):
        for j, a in enumerate(res):
            s = np.linalg.svd(A - (a + 1j * b) * eye, compute_uv=False)
            values[i, j] = s[-1]
    return PortraitGrid(grid=z_grid, values=values)


def resolvent_growth_probe(f: TorusSymbol, w: TorusPoint, N_list) -> list[tuple[int, float]]:
    """sigma_min(f_N - f(w)) for each N; requires {Re f, Im f}(w) < 0.

    The bracket condition is what makes z = f(w) a point of superpolynomial
    resolvent growth; a nonnegative bracket is a precondition violation and
    the offending value is reported.
    """
    br = poisson_bracket(f.real_part(), f.imag_part())
    bval = br.eval(w).real
    if not bval < 0:
        raise PreconditionError(
            f"bracket {{Re f, Im f}} at w={w} is {bval:.6g}, not negative")
    z = f.eval(w)
    out = []
    for N in N_list:
        A = quantize(f, int(N)).matrix
        s = np.linalg.svd(A - z * np.eye(A.shape[0]), compute_uv=False)
        out.append((int(N), float(s[-1])))
    return out
