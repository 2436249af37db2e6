"""Sign + log10 representation for quantities far outside double range.

Dimensionless angular momenta reach 1e60 while the induced phases sit near
1e-74, so products of the two overflow/underflow ordinary doubles.  All
bookkeeping here is done as (sign, log10 |x|) pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class SignedLog:
    """A real number stored as a sign in {-1, 0, +1} and log10 of its magnitude."""

    sign: int
    log10: float  # -inf when sign == 0

    @staticmethod
    def from_linear(x: float) -> "SignedLog":
        if x == 0.0:
            return SignedLog(0, -math.inf)
        return SignedLog(1 if x > 0 else -1, math.log10(abs(x)))

    @staticmethod
    def from_log10(log10_magnitude: float, sign: int = 1) -> "SignedLog":
        if sign == 0:
            return SignedLog(0, -math.inf)
        return SignedLog(1 if sign > 0 else -1, log10_magnitude)

    @property
    def linear(self) -> float:
        """Closest double; 0.0 on underflow, +-inf on overflow."""
        if self.sign == 0:
            return 0.0
        if self.log10 > 308.0:
            return math.inf * self.sign
        if self.log10 < -323.0:
            return 0.0
        return self.sign * 10.0 ** self.log10

    @property
    def representable(self) -> bool:
        return self.sign == 0 or abs(self.log10) < 300.0

    def __mul__(self, other: "SignedLog") -> "SignedLog":
        if self.sign == 0 or other.sign == 0:
            return SignedLog(0, -math.inf)
        return SignedLog(self.sign * other.sign, self.log10 + other.log10)

    def scaled(self, factor: float) -> "SignedLog":
        return self * SignedLog.from_linear(factor)


def log10_sum(a: float, b: float) -> float:
    """log10(10**a + 10**b) without leaving the log domain."""
    if a == -math.inf:
        return b
    if b == -math.inf:
        return a
    hi, lo = (a, b) if a >= b else (b, a)
    return hi + math.log10(1.0 + 10.0 ** (lo - hi))
