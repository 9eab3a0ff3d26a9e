"""Executable invariant battery behind the `selftest` subcommand.

A fast, deterministic subset of every module's invariant list; the pytest
suite is the exhaustive version.  Prints one line per check and returns
whether all of them passed.
"""

from __future__ import annotations

import numpy as np

from .linops import hs_norm, op_norm, sigma_min, svd
from .pseudo import ZGrid, sigma_min_grid
from .quantize import dft_matrix, quantize, trace_formula
from .randmat import PerturbationSpec, perturbation, sample_ginibre
from .regularize import (bump, bump_wide, func_calc_of_gram,
                         regularized_inverse_residual, regularized_operator)
from .rmt import inverse_distance_integral, log_trace_bound
from .symbol import (TorusPoint, poisson_bracket, random_band_limited,
                     scottish_flag)
from .weyl import Disk, HalfPlane, count_in_region, region_family_volumes, symbol_volume


def _checks(fast: bool):
    sf = scottish_flag()
    rng = np.random.default_rng(2024)

    def dft_unitary():
        F = dft_matrix(16)
        return np.abs(F @ F.conj().T - np.eye(16)).max() <= 1e-13

    def hermitian_real_symbols():
        f = random_band_limited(1, 2, rng, real=True)
        A = quantize(f, 12).matrix
        return np.abs(A - A.conj().T).max() <= 1e-12

    def trace_consistency():
        f = random_band_limited(1, 3, rng)
        N = 16
        return abs(np.trace(quantize(f, N).matrix) - trace_formula(f, N)) <= 1e-10 * N

    def bracket_antisymmetry():
        f = random_band_limited(1, 2, rng)
        g = random_band_limited(1, 2, rng)
        h1 = poisson_bracket(f, g)
        h2 = poisson_bracket(g, f)
        keys = set(h1.coeffs) | set(h2.coeffs)
        return all(abs(h1.coeffs.get(k, 0j) + h2.coeffs.get(k, 0j)) <= 1e-10
                   for k in keys)

    def bracket_sign_at_probe():
        br = poisson_bracket(sf.real_part(), sf.imag_part())
        return br.eval(TorusPoint.of(0.125, 0.125)).real < 0

    def regularizer_floor():
        A = (rng.standard_normal((20, 20)) + 1j * rng.standard_normal((20, 20)))
        return sigma_min(regularized_operator(A, 0.1)) >= 0.1 - 1e-12

    def exchange_residual():
        A = (rng.standard_normal((15, 15)) + 1j * rng.standard_normal((15, 15)))
        return regularized_inverse_residual(A) <= 1e-10 * (1 + op_norm(A))

    def bump_plateaus():
        ts = np.linspace(-20, 20, 2001)
        psi = bump(ts)
        wide = bump_wide(ts)
        ok = np.all((psi >= 0) & (psi <= 1))
        ok &= np.all(psi[np.abs(ts) <= 1] == 1.0) and np.all(psi[np.abs(ts) >= 4] == 0.0)
        ok &= np.all(wide[np.abs(ts) <= 4] == 1.0)
        return bool(ok)

    def gram_calc_projects():
        A = (rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8)))
        P = func_calc_of_gram(A, bump, 0.5)
        G = A @ A.conj().T
        return op_norm(P @ G - G @ P) <= 1e-10 * op_norm(G)

    def ginibre_determinism():
        return np.array_equal(sample_ginibre(6, 99), sample_ginibre(6, 99))

    def ginibre_moment():
        Q = sample_ginibre(40, 5)
        return abs(hs_norm(Q) ** 2 / 1600 - 1.0) < 0.2

    def absolute_mode_norm():
        spec = PerturbationSpec.absolute(1e-4, 3, 2)
        E = perturbation(spec, 0, 24)
        return abs(op_norm(E) - 1e-4) <= 1e-12

    def volume_additivity():
        d1 = Disk(0j, 0.4)
        d2 = Disk(1.5 + 0j, 0.2)
        v1, v2 = region_family_volumes(sf, [d1, d2], 256)
        both = v1 + v2

        class Union:
            def contains(self, z):
                return d1.contains(z) | d2.contains(z)

        return abs(symbol_volume(sf, Union(), 256) - both) == 0.0

    def halfplane_symmetry():
        return abs(symbol_volume(sf, HalfPlane(0.0), 512) - 0.5) <= 2 / 512

    def counting_is_strict():
        return count_in_region(np.array([0.0, 2.0]), Disk(0j, 1.0)) == 1 and \
            count_in_region(np.array([1.0 + 0j]), Disk(0j, 1.0)) == 0

    def portrait_lipschitz():
        zg = ZGrid(-0.4, 0.4, -0.4, 0.4, 5, 5)
        port = sigma_min_grid(sf, 24, zg)
        res, ims = zg.axes()
        dre = res[1] - res[0]
        diffs = np.abs(np.diff(port.values, axis=1))
        return np.all(diffs <= dre + 1e-12)

    def g_value():
        return abs(inverse_distance_integral(0.0) - np.pi ** 1.5) <= 1e-3

    def bound_monotone():
        A = np.diag([0.0, 0.3, 1.0]).astype(complex)
        vals = [log_trace_bound(A, d) for d in (1e-1, 1e-2, 1e-3)]
        return vals[0] <= vals[1] <= vals[2]

    checks = [
        ("dft unitarity", dft_unitary),
        ("real symbols quantize Hermitian", hermitian_real_symbols),
        ("trace formula vs matrix trace", trace_consistency),
        ("poisson bracket antisymmetry", bracket_antisymmetry),
        ("bracket negative at probe point", bracket_sign_at_probe),
        ("regularized operator sigma floor", regularizer_floor),
        ("regularized inverse exchange residual", exchange_residual),
        ("bump plateau/support", bump_plateaus),
        ("gram functional calculus commutes", gram_calc_projects),
        ("ginibre determinism", ginibre_determinism),
        ("ginibre HS moment", ginibre_moment),
        ("absolute-mode perturbation norm", absolute_mode_norm),
        ("volume additivity on shared grid", volume_additivity),
        ("halfplane volume = 1/2", halfplane_symmetry),
        ("open-region counting", counting_is_strict),
        ("portrait 1-Lipschitz", portrait_lipschitz),
        ("inverse-distance integral at 0", g_value),
        ("trace bound monotone in delta", bound_monotone),
    ]
    if fast:
        checks = [c for c in checks if c[0] not in ("portrait 1-Lipschitz",)]
    return checks


def run_selftest(fast: bool = False, threads: int = 1, verbose: bool = True) -> bool:
    ok_all = True
    for name, fn in _checks(fast):
        try:
            ok = bool(fn())
        except Exception as exc:  # noqa: BLE001 - report, keep going
            ok = False
            if verbose:
                print(f"FAIL {name}: raised {exc!r}")
            ok_all = False
            continue
        if verbose:
            print(("PASS" if ok else "FAIL") + f" {name}")
        ok_all &= ok
    return ok_all
