"""Exact capacity toolkit for finite-field matrix channels.

The channel multiplies an input matrix, perturbed by a random additive
error of prescribed rank law, by a uniformly random invertible matrix.
This package computes its capacity exactly: the matrix-counting functions
are evaluated in exact integer arithmetic, the channel law in exact
rational arithmetic, and the capacity by a certified-gap concave solver
over input rank distributions.  An independent brute-force oracle
(``gammacap.oracle``) re-derives everything by enumeration on small fields
so the closed forms are testable rather than trusted.
"""

from .exactcomb import count_rank_matrices, is_prime_power, qbinom, validate_field_order
from .matrixfn import (
    DimProfile1,
    DimProfile2,
    bdp_check,
    c_count,
    c_prime,
    f0,
    f0_product,
    f1,
    f2,
    f_small,
    g_count,
    h_count,
    l_count,
)
from .channel import (
    ChannelParams,
    RankDistribution,
    binomial_packets_model,
    build_error_model,
    conditional_entropy,
    constant_rank_model,
    count_spanning_tuples,
    empirical_model,
    h_r,
    iid_vectors_model,
    mutual_information,
    output_entropy,
    output_rank_distribution,
    parse_error_model,
    rank_class_size,
    rho_avg,
    rho_given_ranks,
    uniform_rank_distribution,
)
from .solver import CapacityResult, SolverConfig, gradient, maximize, objective

__version__ = "0.1.0"

__all__ = [
    "CapacityResult",
    "ChannelParams",
    "DimProfile1",
    "DimProfile2",
    "RankDistribution",
    "SolverConfig",
    "bdp_check",
    "binomial_packets_model",
    "build_error_model",
    "c_count",
    "c_prime",
    "conditional_entropy",
    "constant_rank_model",
    "count_rank_matrices",
    "count_spanning_tuples",
    "empirical_model",
    "f0",
    "f0_product",
    "f1",
    "f2",
    "f_small",
    "g_count",
    "gradient",
    "h_count",
    "h_r",
    "iid_vectors_model",
    "is_prime_power",
    "l_count",
    "maximize",
    "mutual_information",
    "objective",
    "output_entropy",
    "output_rank_distribution",
    "parse_error_model",
    "qbinom",
    "rank_class_size",
    "rho_avg",
    "rho_given_ranks",
    "uniform_rank_distribution",
    "validate_field_order",
    "__version__",
]
