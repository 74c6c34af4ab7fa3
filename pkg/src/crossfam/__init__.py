"""Exact tools for cross-t-intersecting uniform set families."""

__version__ = "0.1.0"

from .bounds import k_bound, n0_threshold, pair_bound, threshold_applicable
from .compression import (
    CompressionIndex,
    CompressionTrace,
    big_delta,
    compress_pair_to_fixpoint,
    compress_to_fixpoint,
    delta,
    is_left_compressed,
    potential,
)
from .intersection import (
    StarDescriptor,
    compatible_family,
    is_cross_t_intersecting,
    is_cross_t_intersecting_k,
    is_t_intersecting,
    recognize_star,
    star,
)
from .search import (
    SearchGuardError,
    SearchReport,
    max_product_bnb,
    max_product_brute,
    max_product_k,
    verify_theorem,
)
from .setcore import (
    ElementSet,
    Family,
    FamilyParseError,
    Params,
    binomial,
    generate_uniform,
    read_family,
    write_family,
)
