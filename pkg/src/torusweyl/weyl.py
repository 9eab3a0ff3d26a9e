r"""Counting regions, torus quadrature, and probabilistic Weyl-law experiments.

Phase-space volumes are midpoint-rule fractions over the uniform M^{2n} torus
grid (nodes (k + 1/2)/M per coordinate), with Lebesgue measure normalized so
vol(T^{2n}) = 1.  The integrands are indicators of sets with smooth boundary,
so the quadrature error is O(1/M); the default M = 2048 and the finer oracle
M = 8192 are both far inside the tolerances used by the counting experiments.

Counting regions are open (strict inequalities).  Under the absolutely
continuous matrix ensembles used here an eigenvalue hits a region boundary
with probability zero, so the open/closed choice never matters statistically.

Eigenvalues are computed once per random draw and shared across all regions
of a sweep; that reuse is the dominant-cost optimization for the counting
tables.  With ``threads > 1`` the draws run on a thread pool; per-draw seeds
make every reported statistic independent of the schedule.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .linops import NumericalError, eigenvalues
from .quantize import quantize
from .randmat import PerturbationSpec, perturbation
from .symbol import TorusSymbol

__all__ = ["Disk", "Strip", "HalfPlane", "Region", "WeylReport", "KappaFit",
           "symbol_volume", "region_family_volumes", "sublevel_volume",
           "sublevel_volumes", "kappa_fit", "count_in_region", "spectra_draws",
           "expected_count", "counting_sweep", "empirical_measure_distance",
           "pushforward_histogram", "eigenvalue_histogram", "histogram_box",
           "hausdorff_distance"]


# -- regions -----------------------------------------------------------------


@dataclass(frozen=True)
class Disk:
    """Open disk |z - center| < radius."""

    center: complex
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    def contains(self, z):
        return np.abs(np.asarray(z) - self.center) < self.radius

    def label(self) -> str:
        return f"disk(center={self.center}, r={self.radius})"


@dataclass(frozen=True)
class Strip:
    """Open vertical strip |Re z - center| < half_width."""

    center: float
    half_width: float

    def __post_init__(self):
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")

    def contains(self, z):
        return np.abs(np.real(np.asarray(z)) - self.center) < self.half_width

    def label(self) -> str:
        return f"strip(center={self.center}, r={self.half_width})"


@dataclass(frozen=True)
class HalfPlane:
    """Open half plane Re z > threshold."""

    threshold: float

    def contains(self, z):
        return np.real(np.asarray(z)) > self.threshold

    def label(self) -> str:
        return f"halfplane(Re z > {self.threshold})"


Region = Disk | Strip | HalfPlane


# -- torus grid quadrature ----------------------------------------------------


def _grid_value_chunks(f: TorusSymbol, M: int, chunk: int = 1 << 20):
    """Yield symbol values over the midpoint M^{2n} grid in flat chunks."""
    n = f.n
    axis = (np.arange(M) + 0.5) / M
    shape = (M,) * (2 * n)
    total = M ** (2 * n)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total))
        coords = np.unravel_index(idx, shape)
        x = np.stack([axis[coords[k]] for k in range(n)], axis=-1)
        xi = np.stack([axis[coords[n + k]] for k in range(n)], axis=-1)
        yield f.eval_points(x, xi)


def region_family_volumes(f: TorusSymbol, regions, grid: int = 2048) -> list[float]:
    """Volumes of f^{-1}(region) for several regions in one grid pass."""
    if grid < 64:
        raise ValueError("grid must be >= 64")
    counts = np.zeros(len(regions), dtype=np.int64)
    total = 0
    for vals in _grid_value_chunks(f, grid):
        total += vals.size
        for k, region in enumerate(regions):
            counts[k] += int(np.count_nonzero(region.contains(vals)))
    return [float(c) / total for c in counts]


def symbol_volume(f: TorusSymbol, region: Region, grid: int = 2048) -> float:
    """vol_{T^{2n}} f^{-1}(region) by midpoint-rule quadrature."""
    return region_family_volumes(f, [region], grid)[0]


def sublevel_volumes(f: TorusSymbol, z: complex, ts, grid: int = 2048) -> np.ndarray:
    """Volumes of {w : |f(w) - z| <= t} for all thresholds t in one pass."""
    ts = np.asarray(ts, dtype=float)
    if np.any(ts <= 0):
        raise ValueError("thresholds must be positive")
    counts = np.zeros(ts.shape, dtype=np.int64)
    total = 0
    for vals in _grid_value_chunks(f, grid):
        total += vals.size
        dist = np.abs(vals - z)
        for k, t in enumerate(ts):
            counts[k] += int(np.count_nonzero(dist <= t))
    return counts / total


def sublevel_volume(f: TorusSymbol, z: complex, t: float, grid: int = 2048) -> float:
    return float(sublevel_volumes(f, z, [t], grid)[0])


# -- kappa fit ----------------------------------------------------------------


@dataclass
class KappaFit:
    """Least-squares exponent of vol{|f - z| <= t} ~ t^kappa on a log-log grid."""

    z: complex
    t_grid: np.ndarray
    volumes: np.ndarray
    kappa_hat: float
    fit_residual: float


def kappa_fit(f: TorusSymbol, z: complex, t_min: float = 1e-2, t_max: float = 1e-1,
              points: int = 12, grid: int = 8192) -> KappaFit:
    """Fit the sublevel-volume growth exponent near z.

    The default window [1e-2, 1e-1] with 12 geometric points is the smallest
    t-range the M = 8192 quadrature still resolves.
    """
    if not (0 < t_min < t_max):
        raise ValueError("need 0 < t_min < t_max")
    if points < 5:
        raise ValueError("need at least 5 fit points")
    ts = np.geomspace(t_min, t_max, points)
    vols = sublevel_volumes(f, z, ts, grid)
    if np.all(vols == 0):
        raise ValueError(f"no-fit: all sublevel volumes vanish near z={z}")
    mask = vols > 0
    logt = np.log(ts[mask])
    logv = np.log(vols[mask])
    slope, intercept = np.polyfit(logt, logv, 1)
    resid = float(np.sqrt(np.mean((logv - (slope * logt + intercept)) ** 2)))
    return KappaFit(z=z, t_grid=ts, volumes=vols, kappa_hat=float(slope),
                    fit_residual=resid)


# -- counting -----------------------------------------------------------------


def count_in_region(eigs, region: Region) -> int:
    """Strict-interior count of eigenvalues in the open region."""
    eigs = np.asarray(eigs)
    if eigs.size == 0:
        return 0
    return int(np.count_nonzero(region.contains(eigs)))


def spectra_draws(f: TorusSymbol, N: int, spec: PerturbationSpec,
                  threads: int = 1) -> list[np.ndarray]:
    """Eigenvalues of f_N + E_i for every draw i, computed once and reused.

    A failed eigensolve aborts the whole experiment with the offending draw
    seed in the message.
    """
    A = quantize(f, N).matrix

    def one(i: int) -> np.ndarray:
        E = perturbation(spec, i, N, f.n)
        try:
            return eigenvalues(A + E)
        except NumericalError as exc:
            raise NumericalError(
                f"eigenvalue solve failed on draw {i} (seed {spec.draw_seed(i)}): {exc}"
            ) from exc

    if threads <= 1:
        return [one(i) for i in range(spec.draws)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, range(spec.draws)))


@dataclass
class WeylReport:
    """Mean perturbed eigenvalue count in a region vs. the phase-space volume."""

    N: int
    region: Region
    draws: int
    mean_count: float
    stderr: float
    weyl_prediction: float
    relative_gap: float
    counts: np.ndarray = field(repr=False, default=None)


def _report(N, region, counts, prediction) -> WeylReport:
    counts = np.asarray(counts, dtype=float)
    mean = float(counts.mean())
    stderr = float(counts.std(ddof=1) / np.sqrt(len(counts))) if len(counts) > 1 else 0.0
    gap = abs(mean - prediction) / prediction if prediction > 0 else float("nan")
    return WeylReport(N=N, region=region, draws=len(counts), mean_count=mean,
                      stderr=stderr, weyl_prediction=prediction,
                      relative_gap=gap, counts=counts)


def expected_count(f: TorusSymbol, N: int, region: Region, spec: PerturbationSpec,
                   grid: int = 2048, threads: int = 1,
                   eigs: list[np.ndarray] | None = None) -> WeylReport:
    """Mean and standard error of |Spec(f_N + E) ∩ region| over the draws."""
    if spec.draws < 2:
        raise ValueError("need at least 2 draws for a standard error")
    if eigs is None:
        eigs = spectra_draws(f, N, spec, threads)
    counts = [count_in_region(ev, region) for ev in eigs]
    prediction = N ** f.n * symbol_volume(f, region, grid)
    return _report(N, region, counts, prediction)


def counting_sweep(f: TorusSymbol, N: int, regions, spec: PerturbationSpec,
                   grid: int = 2048, threads: int = 1) -> list[WeylReport]:
    """expected_count for a family of regions, reusing one set of spectra."""
    eigs = spectra_draws(f, N, spec, threads)
    volumes = region_family_volumes(f, regions, grid)
    out = []
    for region, vol in zip(regions, volumes):
        counts = [count_in_region(ev, region) for ev in eigs]
        out.append(_report(N, region, counts, N ** f.n * vol))
    return out


# -- empirical measure vs. pushforward ---------------------------------------


def histogram_box(f: TorusSymbol, grid: int = 2048, pad: float = 0.05,
                  bins: int = 24) -> tuple[tuple[float, float], tuple[float, float]]:
    """Bounding box of the symbol's range, padded; shared by both histograms.

    A direction whose range degenerates to a point gets a unit-width box
    offset by half a cell so that the point sits at a cell center (otherwise
    an atom straddling a bin edge would make the distance meaningless).
    """
    re_lo = im_lo = np.inf
    re_hi = im_hi = -np.inf
    for vals in _grid_value_chunks(f, grid):
        re_lo = min(re_lo, float(vals.real.min()))
        re_hi = max(re_hi, float(vals.real.max()))
        im_lo = min(im_lo, float(vals.imag.min()))
        im_hi = max(im_hi, float(vals.imag.max()))

    def expand(lo, hi):
        width = hi - lo
        if width < 1e-9:
            c = 0.5 * (lo + hi)
            half_cell = 0.5 / bins
            return (c - 0.5 - half_cell, c + 0.5 - half_cell)
        return (lo - pad * width, hi + pad * width)

    return expand(re_lo, re_hi), expand(im_lo, im_hi)


def pushforward_histogram(f: TorusSymbol, box, bins: int = 24,
                          grid: int = 2048) -> np.ndarray:
    """Histogram of f under normalized torus Lebesgue measure; sums to 1."""
    H = np.zeros((bins, bins))
    (re_lo, re_hi), (im_lo, im_hi) = box
    for vals in _grid_value_chunks(f, grid):
        re = np.clip(vals.real.ravel(), re_lo, np.nextafter(re_hi, -np.inf))
        im = np.clip(vals.imag.ravel(), im_lo, np.nextafter(im_hi, -np.inf))
        h, _, _ = np.histogram2d(re, im, bins=bins, range=[(re_lo, re_hi), (im_lo, im_hi)])
        H += h
    return H / H.sum()


def eigenvalue_histogram(eigs_list, box, bins: int = 24) -> np.ndarray:
    """Draw-averaged eigenvalue histogram on the same box; sums to 1."""
    H = np.zeros((bins, bins))
    (re_lo, re_hi), (im_lo, im_hi) = box
    for ev in eigs_list:
        re = np.clip(np.real(ev), re_lo, np.nextafter(re_hi, -np.inf))
        im = np.clip(np.imag(ev), im_lo, np.nextafter(im_hi, -np.inf))
        h, _, _ = np.histogram2d(re, im, bins=bins, range=[(re_lo, re_hi), (im_lo, im_hi)])
        H += h
    return H / H.sum()


def empirical_measure_distance(f: TorusSymbol, N: int, spec: PerturbationSpec,
                               bins: int = 24, grid: int = 2048,
                               threads: int = 1) -> float:
    """Total-variation distance between the draw-averaged perturbed spectral
    histogram and the pushforward histogram of f, on a shared bins x bins box."""
    if bins < 8:
        raise ValueError("bins must be >= 8")
    box = histogram_box(f, grid, bins=bins)
    push = pushforward_histogram(f, box, bins, grid)
    eigs = spectra_draws(f, N, spec, threads)
    emp = eigenvalue_histogram(eigs, box, bins)
    return 0.5 * float(np.abs(push - emp).sum())


# -- spectra comparison --------------------------------------------------------


def hausdorff_distance(a, b) -> float:
    """Hausdorff distance between two finite point sets in C."""
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    if a.size == 0 or b.size == 0:
        raise ValueError("point sets must be nonempty")
    d = np.abs(a[:, None] - b[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))
