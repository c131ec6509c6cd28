"""Exceptional masses (zeros of theta'''(0; m)) and inflection points of theta.

Roots are bracketed by sign changes on a uniform grid and polished with
Brent's method.  Mass roots are located on g(m) = m**3 theta'''(0; m), which
has the same zeros for m > 0 without the m**-3 blow-up near the origin.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, stats

from .dispersion import (
    check_mass,
    theta3_numerator,
    theta5_numerator,
    theta_derivative,
    theta_derivs_at_zero,
)
from .errors import DomainError

MASS_GRID_STEP = 0.05
INFLECTION_GRID_STEP = 0.05
MIN_M_MAX = 5.0


@dataclass(frozen=True)
class ExceptionalMass:
    k: int
    m_k: float
    residual: float  # |theta'''(0; m_k)|
    scaled_d5: float  # m_k**3 * theta^(5)(0; m_k)
    asymptotic_gap: float  # m_k - (k + k0 + 1/2) pi


@dataclass(frozen=True)
class InflectionPoint:
    l: int
    xi_l: float
    d3_at_root: float
    d2_residual: float


@dataclass
class InflectionScan:
    m: float
    xi_max: float
    points: list = field(default_factory=list)
    slope: float = math.nan
    truncated: bool = False


def sign_change_brackets(f, a, b, step):
    """Cells [x_i, x_{i+1}] of a uniform grid on [a, b] where ``f`` changes sign.

    ``f`` must be vectorised.  A cell whose right end is an exact zero is
    reported; a zero on the left end belongs to the previous cell.
    """
    n = max(1, int(math.ceil((b - a) / step)))
    x = np.linspace(a, b, n + 1)
    y = np.asarray(f(x), dtype=float)
    s = np.sign(y)
    idx = np.nonzero((s[:-1] * s[1:] < 0) | ((s[1:] == 0) & (s[:-1] != 0)))[0]
    return [(float(x[i]), float(x[i + 1])) for i in idx]


def _stable_brackets(f, a, b, step, max_halvings=6):
    brackets = sign_change_brackets(f, a, b, step)
    for _ in range(max_halvings):
        step *= 0.5
        finer = sign_change_brackets(f, a, b, step)
        if len(finer) == len(brackets):
            break
        brackets = finer
    return brackets


def _polish(f, lo, hi):
    flo = float(f(lo))
    fhi = float(f(hi))
    if fhi == 0.0:
        return hi
    if flo == 0.0:
        return lo
    return optimize.brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps,
                           maxiter=200)


def fit_k0(roots, candidates=(-1, 0, 1)):
    """Offset k0 minimising sum_k |m_k - (k + k0 + 1/2) pi|."""
    roots = np.asarray(roots, dtype=float)
    k = np.arange(1, len(roots) + 1)
    costs = [np.abs(roots - (k + k0 + 0.5) * np.pi).sum() for k0 in candidates]
    return candidates[int(np.argmin(costs))]


def find_exceptional_masses(m_max, step=MASS_GRID_STEP):
    """All zeros of theta'''(0; m) in (0, m_max], ascending."""
    m_max = float(m_max)
    if not m_max >= MIN_M_MAX:
        raise DomainError(f"m_max must be >= {MIN_M_MAX}, got {m_max!r}")
    # g(m) ~ -2 m**5 / 5 near 0, so the grid can start one step in
    brackets = _stable_brackets(theta3_numerator, step, m_max, step)
    roots = [_polish(theta3_numerator, lo, hi) for lo, hi in brackets]
    roots = sorted(r for r in roots if 0.0 < r <= m_max)
    if not roots:
        return []
    k0 = fit_k0(roots)
    out = []
    for k, r in enumerate(roots, start=1):
        out.append(ExceptionalMass(
            k=k,
            m_k=r,
            residual=abs(float(theta3_numerator(r))) / r**3,
            scaled_d5=3.0 * float(theta5_numerator(r)) / r**2,
            asymptotic_gap=r - (k + k0 + 0.5) * math.pi,
        ))
    return out


def nearest_exceptional_mass(m):
    """Closest element of the exceptional set to ``m`` (searches up to m + 5)."""
    m = check_mass(m)
    masses = find_exceptional_masses(max(MIN_M_MAX, m + 5.0))
    return min(masses, key=lambda e: abs(e.m_k - m))


def theta3_curve(m_grid):
    """Rows (m, theta'''(0; m)) from the closed form."""
    m_grid = np.asarray(m_grid, dtype=float)
    if m_grid.size and not np.all(m_grid > 0):
        raise DomainError("all masses must be positive")
    values = [theta_derivs_at_zero(m).d3 for m in m_grid]
    return np.column_stack([m_grid, values]) if m_grid.size else np.empty((0, 2))


def fifth_derivative_scaling(masses):
    """Log-log slope of |theta^(5)(0; m_k)| against m_k.

    Returns ``scipy.stats.linregress`` output.
    """
    mk = np.array([e.m_k for e in masses])
    d5 = np.array([abs(e.scaled_d5) for e in masses]) / mk**3
    return stats.linregress(np.log(mk), np.log(d5))


def inflection_scan(m, xi_max, count=None, step=INFLECTION_GRID_STEP):
    """Positive zeros xi_l of theta''(.; m) up to ``xi_max``.

    ``slope`` is the log-log regression slope of |theta'''(xi_l)| against
    xi_l over the last half of the roots.  If ``count`` is given, at most that
    many roots are returned and ``truncated`` flags a shortfall.
    """
    m = check_mass(m)
    xi_max = float(xi_max)
    if not xi_max > m:
        raise DomainError("xi_max must exceed m")

    def d2(x):
        return theta_derivative(x, m, 2)

    points = []
    for lo, hi in sign_change_brackets(d2, step, xi_max, step):
        root = _polish(lambda x: float(d2(x)), lo, hi)
        points.append(InflectionPoint(
            l=len(points) + 1,
            xi_l=root,
            d3_at_root=float(theta_derivative(root, m, 3)),
            d2_residual=abs(float(d2(root))),
        ))
        if count is not None and len(points) >= count:
            break

    scan = InflectionScan(m=m, xi_max=xi_max, points=points)
    scan.truncated = count is not None and len(points) < count
    tail = points[len(points) // 2:]
    if len(tail) >= 2:
        x = np.log([p.xi_l for p in tail])
        y = np.log([abs(p.d3_at_root) for p in tail])
        scan.slope = float(stats.linregress(x, y).slope)
    return scan
