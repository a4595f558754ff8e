"""Dimension-dependent eigenvalue bound constants, in extended precision.

For sphere dimension n >= 2:

    tight(n) = ((2n+2)^{n/2} + 2 n^{n/2})^{2/n}
    coarse(n) = 2^{2/n} (2n+2)

tight(2) = 10, coarse(2) = 12; the ratio tight/coarse lies in [2^{-2/n}, 1)
and tends to 1 from below.  Evaluation uses mpmath so large n neither
overflows nor loses the leading digits.
"""

from dataclasses import dataclass

import mpmath as mp

from .errors import DomainError

__all__ = ["BoundPair", "bound_constants", "ratio_table"]

_DPS = 30


@dataclass(frozen=True)
class BoundPair:
    dim: int
    tight: float
    coarse: float
    ratio: float
    ratio_lower: float  # 2^{-2/n}, a proven lower bound for the ratio


def bound_constants(n):
    """Both bound constants for sphere dimension n (>= 2), 30-digit internals."""
    if n < 2:
        raise DomainError(f"bound constants need n >= 2, got {n}")
    with mp.workdps(_DPS):
        half = mp.mpf(n) / 2
        tight = ((2 * n + 2) ** half + 2 * mp.mpf(n) ** half) ** (mp.mpf(2) / n)
        coarse = mp.mpf(2) ** (mp.mpf(2) / n) * (2 * n + 2)
        ratio = tight / coarse
        lower = mp.mpf(2) ** (-mp.mpf(2) / n)
        return BoundPair(
            dim=int(n),
            tight=float(tight),
            coarse=float(coarse),
            ratio=float(ratio),
            ratio_lower=float(lower),
        )


def ratio_table(n_max, n_min=2):
    """BoundPair rows for n = n_min..n_max (ascending)."""
    if n_max < n_min:
        raise DomainError(f"empty range: n_max = {n_max} < n_min = {n_min}")
    return [bound_constants(n) for n in range(n_min, n_max + 1)]
