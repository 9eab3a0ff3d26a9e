import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torusweyl.linops import eigenvalues
from torusweyl.quantize import quantize
from torusweyl.randmat import PerturbationSpec, perturbation
from torusweyl.symbol import constant, scottish_flag
from torusweyl.weyl import (Disk, HalfPlane, Strip, count_in_region,
                            counting_sweep, empirical_measure_distance,
                            expected_count, hausdorff_distance, kappa_fit,
                            pushforward_histogram, histogram_box,
                            region_family_volumes, spectra_draws,
                            sublevel_volumes, symbol_volume)

# frozen M = 8192 midpoint-quadrature oracle (see tests/test_acceptance.py,
# which recomputes it live); the coarse-grid test below checks 2048 vs 8192
DISK_HALF_VOL_8192 = 0.08515477180480957


def test_whole_plane_volume_is_one():
    assert symbol_volume(scottish_flag(), Disk(0j, 10.0), 256) == 1.0


def test_halfplane_volume_half():
    for M in (64, 256, 2048):
        v = symbol_volume(scottish_flag(), HalfPlane(0.0), M)
        assert abs(v - 0.5) <= 2.0 / M


def test_disk_volume_grid_convergence():
    v2048 = symbol_volume(scottish_flag(), Disk(0j, 0.5), 2048)
    assert abs(v2048 - DISK_HALF_VOL_8192) <= 1e-3


def test_strip_volume_against_arcsine_law():
    # vol{|cos(2 pi x)| < r} = (2/pi) arcsin r, exactly 1/3 at r = 1/2
    v = symbol_volume(scottish_flag(), Strip(0.0, 0.5), 2048)
    assert abs(v - 1.0 / 3.0) <= 2.0 / 2048


def test_sublevel_total_mass():
    f = scottish_flag()
    vols = sublevel_volumes(f, 0j, [10.0], 128)
    assert vols[0] == 1.0


def test_sublevel_monotone_in_t():
    f = scottish_flag()
    ts = np.linspace(0.05, 1.5, 10)
    vols = sublevel_volumes(f, 0.3 + 0.2j, ts, 256)
    assert np.all(np.diff(vols) >= 0)


def test_volume_additivity_disjoint():
    f = scottish_flag()
    d1, d2 = Disk(0j, 0.4), Disk(0.9 + 0.9j, 0.15)

    class Union:
        @staticmethod
        def contains(z):
            return d1.contains(z) | d2.contains(z)

    v1, v2 = region_family_volumes(f, [d1, d2], 512)
    assert symbol_volume(f, Union(), 512) == v1 + v2


def test_kappa_no_fit_far_outside_range():
    with pytest.raises(ValueError, match="no-fit"):
        kappa_fit(scottish_flag(), 50 + 50j, grid=128)


def test_kappa_fit_parameter_validation():
    with pytest.raises(ValueError):
        kappa_fit(scottish_flag(), 0j, t_min=0.1, t_max=0.01, grid=128)
    with pytest.raises(ValueError):
        kappa_fit(scottish_flag(), 0j, points=3, grid=128)


def test_count_in_region_basics():
    assert count_in_region(np.array([0.0 + 0j, 2.0 + 0j]), Disk(0j, 1.0)) == 1
    assert count_in_region(np.array([]), Disk(0j, 1.0)) == 0
    # boundary point excluded: open region
    assert count_in_region(np.array([1.0 + 0j]), Disk(0j, 1.0)) == 0
    assert count_in_region(np.array([0.3 + 5j]), Strip(0.0, 0.5)) == 1


@settings(max_examples=30, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False,
                                   allow_infinity=False), max_size=24),
       st.floats(0.1, 2.5))
def test_count_bounded_and_monotone(zs, r):
    eigs = np.array(zs, dtype=complex)
    small = count_in_region(eigs, Disk(0j, r))
    big = count_in_region(eigs, Disk(0j, r + 0.5))
    assert 0 <= small <= big <= len(zs)


def test_expected_count_constant_symbol():
    f = constant(1, 0.5)
    spec = PerturbationSpec.absolute(1e-4, 11, 4)
    rep = expected_count(f, 50, Disk(0.5 + 0j, 0.1), spec, grid=256)
    assert rep.mean_count == 50
    assert rep.weyl_prediction == 50
    assert rep.stderr == 0.0
    assert rep.relative_gap == 0.0


def test_expected_count_empty_region():
    spec = PerturbationSpec.absolute(1e-4, 5, 3)
    rep = expected_count(scottish_flag(), 24, Disk(10 + 0j, 0.1), spec, grid=128)
    assert rep.mean_count == 0.0


def test_expected_count_needs_two_draws():
    spec = PerturbationSpec.absolute(1e-4, 5, 1)
    with pytest.raises(ValueError):
        expected_count(scottish_flag(), 16, Disk(0j, 0.5), spec, grid=128)


def test_counting_sweep_limits_and_monotonicity():
    f = scottish_flag()
    N = 24
    spec = PerturbationSpec.absolute(1e-4, 21, 4)
    rs = [1e-9] + [0.1 * k for k in range(1, 10)] + [10.0]
    reports = counting_sweep(f, N, [Disk(0j, r) for r in rs], spec, grid=128)
    assert reports[0].mean_count == 0.0          # r -> 0 limit
    assert reports[-1].mean_count == N           # region contains everything
    means = [rep.mean_count for rep in reports]
    assert all(a <= b for a, b in zip(means, means[1:]))  # nested regions


def test_counting_sweep_reuses_draws():
    f = scottish_flag()
    spec = PerturbationSpec.absolute(1e-4, 3, 3)
    regions = [Disk(0j, 0.5), Strip(0.0, 0.5)]
    reports = counting_sweep(f, 20, regions, spec, grid=128)
    individual = [expected_count(f, 20, reg, spec, grid=128) for reg in regions]
    for a, b in zip(reports, individual):
        assert a.mean_count == b.mean_count
        assert a.stderr == b.stderr


def test_half_split_consistency():
    f = scottish_flag()
    N = 60
    spec = PerturbationSpec.absolute(1e-4, 31, 20)
    eigs = spectra_draws(f, N, spec)
    counts = np.array([count_in_region(ev, Disk(0j, 0.5)) for ev in eigs], dtype=float)
    first, second = counts[:10], counts[10:]
    se = np.sqrt(first.std(ddof=1) ** 2 / 10 + second.std(ddof=1) ** 2 / 10)
    assert abs(first.mean() - second.mean()) <= max(4 * se, 1e-12)


def test_spectra_draws_thread_independent():
    f = scottish_flag()
    spec = PerturbationSpec.absolute(1e-4, 8, 6)
    a = spectra_draws(f, 20, spec, threads=1)
    b = spectra_draws(f, 20, spec, threads=4)
    for ev1, ev2 in zip(a, b):
        assert np.array_equal(ev1, ev2)


def test_perturbed_spectrum_moves_far_despite_tiny_norm():
    # spectral instability: a 1e-4 perturbation moves the spectrum by >= 0.1
    f = scottish_flag()
    N = 100
    A = quantize(f, N).matrix
    unperturbed = eigenvalues(A)
    spec = PerturbationSpec.absolute(1e-4, 42, 1)
    perturbed = eigenvalues(A + perturbation(spec, 0, N))
    assert hausdorff_distance(unperturbed, perturbed) >= 0.1


def test_hausdorff_basics():
    a = np.array([0j, 1 + 0j])
    b = np.array([0j])
    assert hausdorff_distance(a, b) == pytest.approx(1.0)
    assert hausdorff_distance(a, a) == 0.0
    with pytest.raises(ValueError):
        hausdorff_distance(a, np.array([]))


def test_pushforward_histogram_normalized():
    f = scottish_flag()
    box = histogram_box(f, grid=256)
    H = pushforward_histogram(f, box, bins=24, grid=256)
    assert abs(H.sum() - 1.0) <= 1e-12
    assert np.all(H >= 0)


def test_empirical_distance_constant_symbol():
    f = constant(1, 0.3 + 0.4j)
    spec = PerturbationSpec.absolute(1e-4, 13, 4)
    d = empirical_measure_distance(f, 20, spec, bins=24, grid=64)
    # both measures concentrate in the single cell containing the constant
    assert d <= 2.0 / 24


def test_empirical_distance_in_unit_interval():
    spec = PerturbationSpec.absolute(1e-4, 13, 3)
    d = empirical_measure_distance(scottish_flag(), 20, spec, bins=12, grid=128)
    assert 0.0 <= d <= 1.0


def test_region_validation():
    with pytest.raises(ValueError):
        Disk(0j, 0.0)
    with pytest.raises(ValueError):
        Strip(0.0, -1.0)
