"""Computational toolkit for thin prime subsets cut out of regularly
varying ranges: membership sieves, weighted exponential sums, Vaughan
decompositions, Z_N transference measures and Hardy-Littlewood majorant
norm experiments."""

__version__ = "0.1.0"

from .regvar import (DomainError, PsiSpec, RegularFunctionSpec,
                     SlowlyVaryingSpec, SpecError, eval_h, eval_phi, eval_psi,
                     integrate_psi, make_catalogue_function, make_psi,
                     phi_derivative)
from .sieve import (ResidueClass, ThinSetSpec, WeightedPrimeSet, build_PB,
                    build_thin_set, count_pi_B, in_B, membership_mask,
                    predicted_counts, sieve_primes, weighted_psi_B)
from .expsums import (ExpSumReport, VaughanPieces, chi_ceiling_integer,
                      chi_ceiling_prime, ext2_report, ext_B_report,
                      geometric_class_sum, prime_chi_admissible,
                      sawtooth_phi, sawtooth_truncate, vaughan_decompose,
                      vdc_sum)
from .zn import (BohrSpec, CyclicMeasure, FeasibilityReport, WTrickParams,
                 bohr_set, dft, dft_direct, epsilon_delta_feasible,
                 greedy_3ap_free, has_3ap_int, has_3ap_zn, idft,
                 lambda_measure, large_spectrum, loglog_scale, restrict,
                 rho_measure, smooth, sup_nonzero_fourier, trilinear_direct,
                 trilinear_fft, w_trick_rescale)
from .majorant import (ExpPolynomial, admissible_r, discrete_lr_fourier_norm,
                       lr_norm, lr_norm_report, majorant_ratio,
                       prime_exp_polynomial, window_lower_bound)
from .config import ExperimentConfig, config_from_sections, dump_config, load_config
from .experiments import Table, calibrate_constant, run_command, seed_sequence

__all__ = [name for name in dir() if not name.startswith("_")]
