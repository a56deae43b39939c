"""Exact and interval tools for harmonic sums close to one."""

from ._core import (
    CapacityError,
    CheckpointError,
    DomainError,
    IndexError,
    UndecidableError,
    approx_pairs,
    certify,
    choose_d,
    convergents,
    count_quadratic,
    et_check,
    hdiff_exact,
    is_convergent,
    legendre_threshold,
    scan_csv,
    scan_records,
    subseq_entry,
    t_of_n,
)

__all__ = [
    "CapacityError",
    "CheckpointError",
    "DomainError",
    "IndexError",
    "UndecidableError",
    "approx_pairs",
    "certify",
    "choose_d",
    "convergents",
    "count_quadratic",
    "et_check",
    "hdiff_exact",
    "is_convergent",
    "legendre_threshold",
    "scan_csv",
    "scan_records",
    "subseq_entry",
    "t_of_n",
]
