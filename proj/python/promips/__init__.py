"""Probability-guaranteed c-approximate maximum inner product search."""

from ._promips import (
    ContractViolation,
    FormatError,
    Index,
    IndexConfig,
    InvalidArgument,
    brute_force,
    build_index,
    chi2_cdf,
    chi2_inv_cdf,
    gaussian_mixture,
    load_index,
    optimized_dimension,
)

__all__ = [
    "ContractViolation",
    "FormatError",
    "Index",
    "IndexConfig",
    "InvalidArgument",
    "brute_force",
    "build_index",
    "chi2_cdf",
    "chi2_inv_cdf",
    "gaussian_mixture",
    "load_index",
    "optimized_dimension",
]
