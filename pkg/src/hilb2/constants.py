"""Numeric constants used in main terms and certified inequalities.

The 50-digit decimal strings are the build-time evaluations (verified against
mpmath in the test suite); the Fraction brackets give certified enclosures for
exact rational-interval checks of inequalities involving pi.
"""

from __future__ import annotations

from fractions import Fraction

# 50 decimal digits, truncated (not rounded), so value <= true constant.
PI_50 = "3.14159265358979323846264338327950288419716939937510"
ZETA3_50 = "1.20205690315959428539973816151144999076498629234049"

PI = float(PI_50)
ZETA3 = float(ZETA3_50)


def _bracket(digits: str) -> tuple[Fraction, Fraction]:
    lo = Fraction(digits)
    return lo, lo + Fraction(1, 10**50)


PI_BRACKET = _bracket(PI_50)
ZETA3_BRACKET = _bracket(ZETA3_50)
