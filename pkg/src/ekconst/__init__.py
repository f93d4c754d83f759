"""Euler-Kronecker constants of cyclotomic fields.

The library computes gamma_q (the constant term of the logarithmic
derivative of the Dedekind zeta function of the q-th cyclotomic field at
s = 1) from Dirichlet L-function data, verifies an exact finite-range
decomposition of gamma_q into prime-counting terms, and runs dyadic-range
experiments against log q. See the README for the CLI.
"""
from .accum import Accumulator, fsum_array
from .characters import (CharacterGroup, DirichletCharacter, build_group,
                         conductor_grid, enumerate_characters,
                         primitive_characters, principal_character)
from .decomp import (DecompositionReport, conductor_correction, decompose,
                     layer_weight, mobius_layer_sum, primitive_phi_sum,
                     progression_term, proxy_defect, ramified_term,
                     window_term)
from .ekgamma import (CacheCorruption, ConductorCache, ConductorTotal,
                      GammaQ, conductor_total, gamma_q,
                      gamma_q_from_prime_sums, precision_tag)
from .experiments import (EhProbeRecord, MeanStatistic, RangeStatistic,
                          RatioBin, ScanRecord, dyadic_mean, eh_probe, emit,
                          parse_scan_csv, ratio_histogram, render,
                          residue_sum_check, scan_range, theorem_statistic)
from .lseries import LValueRecord, l_at_one, l_prime_at_one, l_values, phi_chi
from .sieve import (MAX_TABLE_BOUND, ArithmeticTables, CapacityError,
                    build_tables, divisors, mobius, psi, psi_mod,
                    psi_mod_stream, psi_stream, totient)
from .stieltjes import (DEFAULT_EM_TERMS, EULER_GAMMA, PrecisionError,
                        StieltjesPair, digamma_rational, stieltjes01,
                        stieltjes_pair_table)

__version__ = "0.1.0"

__all__ = [
    "Accumulator", "fsum_array",
    "CharacterGroup", "DirichletCharacter", "build_group", "conductor_grid",
    "enumerate_characters", "primitive_characters", "principal_character",
    "DecompositionReport", "conductor_correction", "decompose",
    "layer_weight", "mobius_layer_sum", "primitive_phi_sum",
    "progression_term", "proxy_defect", "ramified_term", "window_term",
    "CacheCorruption", "ConductorCache", "ConductorTotal", "GammaQ",
    "conductor_total", "gamma_q", "gamma_q_from_prime_sums", "precision_tag",
    "EhProbeRecord", "MeanStatistic", "RangeStatistic", "RatioBin",
    "ScanRecord", "dyadic_mean", "eh_probe", "emit", "parse_scan_csv",
    "ratio_histogram", "render", "residue_sum_check", "scan_range",
    "theorem_statistic",
    "LValueRecord", "l_at_one", "l_prime_at_one", "l_values", "phi_chi",
    "MAX_TABLE_BOUND", "ArithmeticTables", "CapacityError", "build_tables",
    "divisors", "mobius", "psi", "psi_mod", "psi_mod_stream", "psi_stream",
    "totient",
    "DEFAULT_EM_TERMS", "EULER_GAMMA", "PrecisionError", "StieltjesPair",
    "digamma_rational", "stieltjes01", "stieltjes_pair_table",
    "__version__",
]
