"""Threshold n0(r, s, t) and the extremal product bounds."""

from __future__ import annotations

from math import prod
from typing import Sequence

from .setcore import Params, binomial


def n0_threshold(r: int, s: int, t: int) -> int:
    if not 1 <= t <= r <= s:
        raise ValueError(f"need 1 <= t <= r <= s, got r={r}, s={s}, t={t}")
    w = r + s - t
    first = r * (s - t) * binomial(w, t)
    second = (r - t) * binomial(r, t) * binomial(w, t + 1)
    return max(first, second) + t + 1


def k_bound(n: int, r_list: Sequence[int], t: int) -> int:
    """Product of star sizes, one per uniformity."""
    p = Params(n, t, tuple(r_list))
    return prod(binomial(p.n - p.t, r - p.t) for r in p.uniformities)


def pair_bound(params: Params) -> int:
    if not params.is_pair:
        raise ValueError("pair_bound needs exactly two uniformities")
    n, t = params.n, params.t
    return binomial(n - t, params.r - t) * binomial(n - t, params.s - t)


def threshold_applicable(params: Params) -> bool:
    r, s = params.uniformities[-2:]
    return params.n >= n0_threshold(r, s, params.t)


def bound_for(params: Params) -> int:
    return k_bound(params.n, params.uniformities, params.t)
