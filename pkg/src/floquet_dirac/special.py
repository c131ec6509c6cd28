"""Gamma function and the Airy value Ai(0).

A self-contained Lanczos approximation is used so the constants entering the
stationary-phase formulas do not depend on any particular special-function
library; tests compare it against ``math.gamma`` and the reflection formula.
"""

import math

# Lanczos coefficients for g = 7, n = 9 (Godfrey's set); ~1e-15 relative
# accuracy on the positive real axis.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma(z):
    """Gamma function for real ``z`` (not a non-positive integer)."""
    z = float(z)
    if z <= 0.0 and z == math.floor(z):
        raise ValueError("gamma has poles at non-positive integers")
    if z < 0.5:
        # reflection keeps the series argument in its accurate range
        return math.pi / (math.sin(math.pi * z) * gamma(1.0 - z))
    z -= 1.0
    x = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        x += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * x


def airy_ai0():
    """Ai(0) = 1 / (3^(2/3) Gamma(2/3))."""
    return 1.0 / (3.0 ** (2.0 / 3.0) * gamma(2.0 / 3.0))
