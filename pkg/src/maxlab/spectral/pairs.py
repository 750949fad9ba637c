"""Strichartz-pair admissibility and the derivative-loss exponents."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = ["StrichartzPair", "strichartz_pair_classify", "sigma_delta"]

_TOL = 1e-12


def _inv(x):
    return 0.0 if np.isinf(x) else 1.0 / x


@dataclass(frozen=True)
class StrichartzPair:
    rho: float
    p: float
    q: float
    n: int

    def __post_init__(self):
        if strichartz_pair_classify(self.rho, self.p, self.q, self.n) == "invalid":
            raise ValueError(f"invalid Strichartz pair {(self.rho, self.p, self.q, self.n)}")


def strichartz_pair_classify(rho, p, q, n):
    """Classify (rho, p, q, n) as 'sharp' | 'nonsharp' | 'invalid'.

    Validity: rho = n(1/2 - 1/q) - 1/p, 2/p + (n-1)/q <= (n-1)/2,
    p, q in [2, inf], and (p, q, n) != (2, inf, 3).  'sharp' is the
    equality case of the admissibility inequality.
    """
    if not (2 - _TOL <= p) or not (2 - _TOL <= q):
        return "invalid"
    if abs(rho - (n * (0.5 - _inv(q)) - _inv(p))) > _TOL:
        return "invalid"
    lhs = 2 * _inv(p) + (n - 1) * _inv(q)
    rhs = (n - 1) / 2.0
    if lhs > rhs + _TOL:
        return "invalid"
    if abs(p - 2) < _TOL and np.isinf(q) and n == 3:
        return "invalid"
    return "sharp" if abs(lhs - rhs) <= _TOL else "nonsharp"


def sigma_delta(s):
    """Derivative-loss exponents sigma = (2-s)/(2+s), delta = 2/(2+s).

    Rational s (int or Fraction) gives exact Fractions.
    """
    if isinstance(s, (int, Fraction)):
        sf = Fraction(s)
        if not 0 <= sf <= 2:
            raise ValueError(f"s must be in [0,2], got {s}")
        return (2 - sf) / (2 + sf), Fraction(2) / (2 + sf)
    s = float(s)
    if not 0.0 <= s <= 2.0:
        raise ValueError(f"s must be in [0,2], got {s}")
    return (2.0 - s) / (2.0 + s), 2.0 / (2.0 + s)
