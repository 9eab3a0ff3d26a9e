r"""Seeded complex Gaussian (Ginibre) matrices and perturbation scaling.

Convention: a standard complex normal q has independent real and imaginary
parts, each N(0, 1/2), so E|q|^2 = 1 and the density is exp(-|z|^2)/pi.  A
d x d Ginibre matrix has i.i.d. such entries, with matrix density
proportional to exp(-||A||_HS^2).  (The phrase "complex N(0,1)" is ambiguous
in the literature; this module fixes E|q|^2 = 1.)

Reproducibility: every draw gets its own 64-bit seed derived from
(master_seed, draw_index) by the fixed mixing function

    draw_seed = splitmix64(master_seed XOR splitmix64(draw_index + 1)),

iterated once per index for multi-index streams (see ``derive_seed``).  Draws
are therefore independent of scheduling and may be generated concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["splitmix64", "derive_seed", "sample_ginibre", "PerturbationSpec", "perturbation"]

_MASK = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One step of the SplitMix64 mixer (public-domain constants)."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return (x ^ (x >> 31)) & _MASK


def derive_seed(master: int, *indices: int) -> int:
    """Fixed 64-bit mix of a master seed and any number of stream indices."""
    s = master & _MASK
    for k in indices:
        s = splitmix64(s ^ splitmix64((int(k) + 1) & _MASK))
    return s


def sample_ginibre(d: int, seed: int) -> np.ndarray:
    """d x d matrix of i.i.d. standard complex normals (E|q|^2 = 1).

    Deterministic for fixed (d, seed): same arguments give bit-identical
    output.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    rng = np.random.default_rng(seed)
    return (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)


@dataclass(frozen=True)
class PerturbationSpec:
    """How delta * Q is scaled, plus RNG seeding.

    mode "power":    E = N^{-p} Q with Q a fresh Ginibre sample;
    mode "absolute": E = (eta / ||Q||) Q, so ||E|| = eta exactly.
    """

    mode: str
    master_seed: int
    draws: int
    p: float | None = None
    eta: float | None = None

    def __post_init__(self):
        if self.mode not in ("power", "absolute"):
            raise ValueError(f"unknown perturbation mode {self.mode!r}")
        if self.mode == "power" and (self.p is None or self.p <= 0):
            raise ValueError("power mode requires p > 0")
        if self.mode == "absolute" and (self.eta is None or self.eta <= 0):
            raise ValueError("absolute mode requires eta > 0")
        if self.draws < 1:
            raise ValueError("draws must be >= 1")

    @classmethod
    def power(cls, p: float, master_seed: int, draws: int) -> "PerturbationSpec":
        return cls(mode="power", master_seed=master_seed, draws=draws, p=p)

    @classmethod
    def absolute(cls, eta: float, master_seed: int, draws: int) -> "PerturbationSpec":
        return cls(mode="absolute", master_seed=master_seed, draws=draws, eta=eta)

    def draw_seed(self, draw_index: int) -> int:
        return derive_seed(self.master_seed, draw_index)

    def scale_label(self) -> str:
        if self.mode == "power":
            return f"power p={self.p}"
        return f"absolute eta={self.eta}"


def perturbation(spec: PerturbationSpec, draw_index: int, N: int, n: int = 1) -> np.ndarray:
    """The perturbation matrix E for one draw, dimension N^n."""
    if draw_index < 0 or draw_index >= spec.draws:
        raise ValueError(f"draw_index {draw_index} outside 0..{spec.draws - 1}")
    d = N ** n
    Q = sample_ginibre(d, spec.draw_seed(draw_index))
    if spec.mode == "power":
        return float(N) ** (-spec.p) * Q
    norm = np.linalg.svd(Q, compute_uv=False)[0]
    return (spec.eta / norm) * Q
