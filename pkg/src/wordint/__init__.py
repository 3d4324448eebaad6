"""Exact and sampled trace integrals of free-group words over O(n) and Sp(n)."""

from .freegroup import Word, limit_counting, parse, parse_tuple, render
from .integrals import (IntegralResult, chi_max, duality_check, exact_trace_o, exact_trace_sp,
                        first_laurent_truncated, shifted_coefficients, sql_cl_bounds)

__version__ = "0.1.0"

__all__ = [
    "Word", "parse", "parse_tuple", "render", "limit_counting", "IntegralResult", "exact_trace_o",
    "exact_trace_sp", "chi_max", "sql_cl_bounds", "first_laurent_truncated", "shifted_coefficients",
    "duality_check",
]
