"""Exact coefficients of level-one Hecke eigenforms and the experiments built on them."""

__version__ = "0.1.0"

from .chebyshev import IntervalUnion, build_I_q, build_J_q, chebyshev_u, st_measure
from .density import delta_expected, estimate_density, pi_f_m
from .eigenform import (FORMS, EigenformTable, build_form, coeff_at_prime_power, get_form,
                        normalized_lambda)
from .experiments import sato_tate_short_sum, scan_interval, valuation_ledger
from .minorize import minorize, verify_cert
from .primes import largest_prime_factor, primes_in_interval

__all__ = [
    "FORMS", "EigenformTable", "IntervalUnion", "build_I_q", "build_J_q", "build_form",
    "chebyshev_u", "coeff_at_prime_power", "delta_expected", "estimate_density", "get_form",
    "largest_prime_factor", "minorize", "normalized_lambda", "pi_f_m", "primes_in_interval",
    "sato_tate_short_sum", "scan_interval", "st_measure", "valuation_ledger", "verify_cert",
]
