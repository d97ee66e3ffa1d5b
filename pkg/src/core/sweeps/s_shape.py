from typing import Iterable, Optional

from more_itertools import pairwise

from core.sweeps.s_models import SweepResult


__all__ = ["peak_p", "count_inversions", "risk_series"]


def risk_series(result: SweepResult, n: int, noise_level: float, lo: int = None, hi: int = None):
    """(p, emp_risk_mean) pairs of one series, optionally restricted to lo <= p <= hi."""
    return [
        (r.p, r.emp_risk_mean)
        for r in result.select(n=n, noise_level=noise_level)
        if r.emp_risk_mean is not None and (lo is None or r.p >= lo) and (hi is None or r.p <= hi)
    ]


def peak_p(result: SweepResult, n: int, noise_level: float) -> Optional[int]:
    """Grid p with the largest mean empirical risk in the (n, noise) series."""
    series = risk_series(result, n, noise_level)
    if not series:
        return None
    return max(series, key=lambda item: item[1])[0]


def count_inversions(values: Iterable[float], increasing: bool = True) -> int:
    """Adjacent pairs that break the expected monotone direction."""
    return sum(
        1 for a, b in pairwise(values)
        if (b < a if increasing else b > a)
    )
