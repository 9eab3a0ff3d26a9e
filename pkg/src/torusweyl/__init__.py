"""torusweyl: Toeplitz quantization of tori, random perturbations, and
probabilistic Weyl-law experiments at desk scale."""

__version__ = "0.1.0"

from .errors import PreconditionError
from .linops import NumericalError, SvdFactorization, eigenvalues, hs_norm, op_norm, sigma_min, svd
from .pseudo import PortraitGrid, ZGrid, bracket_sign_map, resolvent_growth_probe, sigma_min_grid
from .quantize import QuantizedOperator, dft_matrix, quantize, trace_formula
from .randmat import PerturbationSpec, derive_seed, perturbation, sample_ginibre, splitmix64
from .regularize import (bump, bump_wide, func_calc_of_gram,
                         regularized_inverse_residual, regularized_operator,
                         regularized_trace_pair, small_singular_count)
from .rmt import (ContourSegment, MonteCarloEstimate, contour_gate, contour_trace_pair,
                  exchange_identity_check, fig3_matrix, inverse_distance_integral,
                  log_trace_bound, median_of_means, perturbed_inverse_trace_check,
                  resolvent_trace_integral, resolvent_trace_integral_d1,
                  scalar_resolvent_expectation)
from .symbol import (TorusPoint, TorusSymbol, builtin_symbol, constant, cos_x, cos_xi,
                     poisson_bracket, random_band_limited, scottish_flag,
                     symbol_digest, symbol_from_doc, symbol_to_doc)
from .weyl import (Disk, HalfPlane, KappaFit, Strip, WeylReport, count_in_region,
                   counting_sweep, empirical_measure_distance, expected_count,
                   hausdorff_distance, kappa_fit, region_family_volumes,
                   spectra_draws, sublevel_volume, sublevel_volumes, symbol_volume)
