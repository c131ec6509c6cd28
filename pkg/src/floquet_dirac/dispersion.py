"""Dispersion relation and monodromy symbol of the switching-mass model.

Over one period T = 2 the mass is +m on [0, 1) and -m on [1, 2).  Per Fourier
mode xi the half-period generator is h(-xi, m) = -xi*sigma3 + m*sigma1, and the
monodromy symbol factors as Mhat = Mscr**2 with

    Mscr(xi; m) = i xi sinc(w) sigma0 + cos(w) sigma3 + m sinc(w) sigma2,
    w = sqrt(m**2 + xi**2).

Mhat has the conjugate Floquet multipliers exp(+-2i theta(xi; m)).

All functions accept numpy arrays for ``xi`` and broadcast.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import DomainError

SIGMA0 = np.eye(2, dtype=complex)
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)

_SINC_SERIES_CUTOFF = 1e-4
_DEGENERATE_OFFDIAG = 1e-12
_SMALL_MASS_SERIES = 0.1


def check_mass(m):
    m = float(m)
    if not m > 0.0 or not np.isfinite(m):
        raise DomainError(f"mass must be a finite positive number, got {m!r}")
    return m


def sinc(x):
    """sin(x)/x with a short Taylor series near the removable singularity."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SINC_SERIES_CUTOFF
    safe = np.where(small, 1.0, x)
    x2 = x * x
    return np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, np.sin(safe) / safe)


def omega(xi, m):
    """w(xi; m) = sqrt(m**2 + xi**2)."""
    m = check_mass(m)
    return np.hypot(m, xi)


def theta(xi, m):
    """Eigenphase theta(xi; m) in (-pi/2, pi/2).

    Principal-branch arctan of xi sin(w) / sqrt(m**2 + xi**2 cos(w)**2); the
    denominator is bounded below by m, so no unwrapping is needed.
    """
    m = check_mass(m)
    xi = np.asarray(xi, dtype=float)
    w = np.hypot(m, xi)
    return np.arctan(xi * np.sin(w) / np.sqrt(m * m + (xi * np.cos(w)) ** 2))


def half_monodromy(xi, m):
    """Mscr(xi; m), shape ``xi.shape + (2, 2)``; Mhat = Mscr @ Mscr."""
    m = check_mass(m)
    xi = np.asarray(xi, dtype=float)
    w = np.hypot(m, xi)
    s = sinc(w)
    c = np.cos(w)
    out = np.empty(xi.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = c + 1j * xi * s
    out[..., 0, 1] = -1j * m * s
    out[..., 1, 0] = 1j * m * s
    out[..., 1, 1] = -c + 1j * xi * s
    return out


def eigenbasis(xi, m):
    """Unitary P(xi; m) whose columns p+ and p- diagonalise Mhat.

    Column p+ belongs to the multiplier exp(+2i theta).  Both columns are the
    vectors (i m sinc w, cos w -+ r), r = sqrt(cos(w)**2 + m**2 sinc(w)**2), up
    to a nonzero scalar; whichever of two proportional forms avoids
    cancellation is used, so the normalisation never degenerates.  Where the
    off-diagonal part of Mscr vanishes the identity is returned.
    """
    m = check_mass(m)
    xi = np.asarray(xi, dtype=float)
    w = np.hypot(m, xi)
    c = np.cos(w)
    q = m * sinc(w)
    r = np.sqrt(c * c + q * q)
    iq = 1j * q
    pos = c >= 0.0

    # eigenvalue +r of c*sigma3 + q*sigma2: (iq, c - r) ~ (r + c, iq)
    plus = np.where(pos, np.stack([r + c + 0j, iq]), np.stack([iq, c - r + 0j]))
    # eigenvalue -r: (iq, c + r) ~ (c - r, iq)
    minus = np.where(pos, np.stack([iq, c + r + 0j]), np.stack([c - r + 0j, iq]))
    plus = plus / np.linalg.norm(plus, axis=0)
    minus = minus / np.linalg.norm(minus, axis=0)

    out = np.empty(xi.shape + (2, 2), dtype=complex)
    out[..., :, 0] = np.moveaxis(plus, 0, -1)
    out[..., :, 1] = np.moveaxis(minus, 0, -1)
    degenerate = np.abs(q) < _DEGENERATE_OFFDIAG
    if np.any(degenerate):
        out[degenerate] = SIGMA0
    return out


def floquet_multipliers(xi, m):
    """Eigenvalues (mu+, mu-) = exp(+-2i theta) of Mhat."""
    th = theta(xi, m)
    return np.exp(2j * th), np.exp(-2j * th)


@dataclass(frozen=True)
class MonodromySymbol:
    xi: float
    m: float
    mhat: np.ndarray
    theta: float
    basis: np.ndarray

    def reconstruct(self):
        """P diag(e^{2i theta}, e^{-2i theta}) P*."""
        d = np.array([np.exp(2j * self.theta), np.exp(-2j * self.theta)])
        return (self.basis * d) @ self.basis.conj().T


def monodromy_symbol(xi, m):
    """Monodromy symbol Mhat(xi; m) with its eigenphase and eigenbasis."""
    m = check_mass(m)
    xi = float(xi)
    half = half_monodromy(xi, m)
    return MonodromySymbol(
        xi=xi,
        m=m,
        mhat=half @ half,
        theta=float(theta(xi, m)),
        basis=eigenbasis(xi, m),
    )


class ThetaDerivatives(NamedTuple):
    d1: float
    d2: float
    d3: float
    d4: float
    d5: float


# Taylor coefficients (in m**2) of theta'''(0;m) and theta^(5)(0;m) about m = 0.
_D3_SERIES = (0.0, -2 / 5, 11 / 105, -17 / 1260, 461 / 415800, -8303 / 129729600)
_D5_SERIES = (0.0, -68 / 21, 130 / 63, -581 / 990, 167267 / 1621620,
              -1159397 / 90810720)


def _even_series(coefs, m):
    m2 = m * m
    return sum(c * m2**k for k, c in enumerate(coefs))


def theta3_numerator(m):
    """g(m) = m**3 theta'''(0; m); same zero set as theta''' for m > 0."""
    s, c = np.sin(m), np.cos(m)
    return -2.0 * s**3 + 3.0 * m * c - 3.0 * s * c**2


def theta5_numerator(m):
    """m**5 theta^(5)(0; m) / 3."""
    s, c = np.sin(m), np.cos(m)
    return (-5.0 * m * c + 3.0 * s * c**4 + 12.0 * s - 10.0 * m * c**3
            - 5.0 * m * m * s - 4.0 * s**3)


def theta_derivs_at_zero(m):
    """Closed-form derivatives of theta(.; m) at xi = 0 (orders 1 to 5).

    Even orders vanish identically because theta is odd in xi.  For small m
    the odd closed forms cancel catastrophically, so a series is used there.
    """
    m = check_mass(m)
    d1 = float(sinc(m))
    if m < _SMALL_MASS_SERIES:
        d3 = _even_series(_D3_SERIES, m)
        d5 = _even_series(_D5_SERIES, m)
    else:
        d3 = float(theta3_numerator(m)) / m**3
        d5 = 3.0 * float(theta5_numerator(m)) / m**5
    return ThetaDerivatives(d1, 0.0, d3, 0.0, d5)


@lru_cache(maxsize=None)
def fd_weights(order, half_width):
    """Exact central-difference weights on offsets -half_width..half_width.

    Returns ``(offsets, weights, accuracy)`` where ``accuracy`` is the power of
    h in the leading truncation error.  Weights come from Fornberg's recursion
    in rational arithmetic.
    """
    offsets = list(range(-half_width, half_width + 1))
    npts = len(offsets)
    if order >= npts:
        raise ValueError("stencil too narrow for the requested order")
    c = [[Fraction(0)] * npts for _ in range(order + 1)]
    c[0][0] = Fraction(1)
    c1 = Fraction(1)
    c4 = Fraction(offsets[0])
    for i in range(1, npts):
        mn = min(i, order)
        c2 = Fraction(1)
        c5, c4 = c4, Fraction(offsets[i])
        for j in range(i):
            c3 = Fraction(offsets[i] - offsets[j])
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2
            for k in range(mn, 0, -1):
                c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3
            c[0][j] = c4 * c[0][j] / c3
        c1 = c2
    weights = c[order]
    k = order + 1
    while sum(w * Fraction(o) ** k for w, o in zip(weights, offsets)) == 0:
        k += 1
    return tuple(offsets), tuple(float(w) for w in weights), k - order


# Per-order step multipliers, tuned so the stencil plus one Richardson step
# reproduces the xi = 0 closed forms to better than 1e-6 relative.
_FD_BASE_STEP = {1: 0.02, 2: 0.2, 3: 0.05, 4: 0.1, 5: 0.05}


def analyticity_scale(xi, m):
    """Rough distance from real xi to the nearest complex singularity of theta.

    Branch points sit where m**2 + xi**2 cos(w)**2 = 0; near a zero of cos(w)
    they are roughly sqrt(m**2 + xi**2 cos(w)**2) / |xi| off the real axis, and
    another pair sits at xi = +-i m.
    """
    xi = np.abs(np.asarray(xi, dtype=float))
    w = np.hypot(m, xi)
    local = np.sqrt(m * m + (xi * np.cos(w)) ** 2) / (m + xi)
    return np.minimum(min(1.0, m), local)


def theta_derivative(xi, m, order):
    """Numerical d^order theta / dxi^order at ``xi`` (order 1..5).

    Central stencil (7 points up to third order, 9 points above) at a step
    proportional to :func:`analyticity_scale`, then one Richardson step with
    the halved step.  With rho the analyticity scale, the absolute error is
    about 1e-6 * rho**(1 - order) for orders up to 4 and 1e-3 * rho**-4 for
    order 5; the closed forms in :func:`theta_derivs_at_zero` are exact at
    xi = 0.
    """
    m = check_mass(m)
    if order not in _FD_BASE_STEP:
        raise DomainError(f"order must be in 1..5, got {order!r}")
    xi = np.asarray(xi, dtype=float)
    offsets, weights, acc = fd_weights(order, 3 if order <= 3 else 4)
    h = _FD_BASE_STEP[order] * analyticity_scale(xi, m)

    def stencil(step):
        total = np.zeros_like(xi)
        for o, w in zip(offsets, weights):
            if w:
                total = total + w * theta(xi + o * step, m)
        return total / step**order

    coarse = stencil(h)
    fine = stencil(0.5 * h)
    gain = 2.0**acc
    return (gain * fine - coarse) / (gain - 1.0)
