"""Direct ODE integration of a single Fourier mode, independent of the closed forms.

Used to validate the propagators.  The switching model is integrated piecewise
over unit intervals so the integrator never steps across a mass jump.
"""

import math

import numpy as np
from scipy.integrate import solve_ivp

from .errors import OracleError
from .evolution import ROTATING, SWITCHING, _check_extent

ORACLE_RTOL = 1e-11
ORACLE_ATOL = 1e-13


def _solve(gen, t0, t1, u0, rtol, atol):
    """Integrate i dU/dt = gen(t) U from t0 to t1 (complex state, both columns)."""

    def rhs(t, y):
        a, b, c, d = gen(t)
        u = y.reshape(2, 2)
        return -1j * np.array([a * u[0] + b * u[1], c * u[0] + d * u[1]]).ravel()

    sol = solve_ivp(rhs, (t0, t1), u0.ravel().astype(complex), method="RK45",
                    rtol=rtol, atol=atol)
    if not sol.success:
        raise OracleError(f"ODE integration failed on [{t0}, {t1}]: {sol.message}")
    return sol.y[:, -1].reshape(2, 2)


def mode_oracle(model, xi, extent, rtol=ORACLE_RTOL, atol=ORACLE_ATOL):
    """Propagator at momentum ``xi`` from direct time stepping, shape (2, 2).

    ``extent`` is periods for the switching model and time otherwise.
    """
    extent = _check_extent(model, extent)
    xi = float(xi)
    m = model.m
    u = np.eye(2, dtype=complex)
    if model.kind == SWITCHING:
        for j in range(2 * extent):
            sign = 1.0 if j % 2 == 0 else -1.0
            entries = (-xi, sign * m, sign * m, xi)
            u = _solve(lambda t, g=entries: g, float(j), float(j + 1), u, rtol, atol)
        return u
    w = model.drive if model.kind == ROTATING else 0.0

    def gen(t):
        e = complex(math.cos(w * t), math.sin(w * t))
        return xi, m * e, m * e.conjugate(), -xi

    if extent == 0:
        return u
    return _solve(gen, 0.0, float(extent), u, rtol, atol)
