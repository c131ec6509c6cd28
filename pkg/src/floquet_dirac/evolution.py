"""Exact Fourier-space evolution for the constant, switching and rotating models.

Every model is diagonal in the Fourier variable, so evolution is a per-mode
multiplication by a 2x2 unitary propagator and the only discretisation is the
xi grid.  Conventions:

* Fourier transform  fhat(xi) = int exp(-i xi x) f(x) dx, inverse with 1/(2 pi).
* Switching model: period T = 2, mass +m then -m; extent is the number of
  periods n and the propagator is P diag(e^{2in theta}, e^{-2in theta}) P*.
* Rotating model: extent is the time t and the propagator is
  U(xi, t) = exp(i t w sigma3 / 2) exp(-i D0(xi + w/2) t) with
  D0(k) = k sigma3 + m sigma1 and w the drive frequency.  The constant-mass
  model is the w = 0 case.  This is the generator xi sigma3 + nu(t), i.e. the
  mirror image x -> -x of the switching model's convention; sup norms and
  decay rates are unaffected.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import optimize

from . import dispersion
from ._parallel import parallel_map
from .errors import ConfigError, DomainError, GridInsufficientError
from .quadrature import integrate_oscillatory

CONSTANT = "constant"
SWITCHING = "switching"
ROTATING = "rotating"
MODEL_KINDS = (CONSTANT, SWITCHING, ROTATING)

ENVELOPES = ("bump", "truncated-gaussian")
MIN_SUPPORT_SAMPLES = 32
SWITCHING_PERIOD = 2.0
GRID_RTOL = 1e-6


@dataclass(frozen=True)
class MassModel:
    kind: str
    m: float
    drive: float = 0.0

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise DomainError(f"unknown model {self.kind!r}; expected one of {MODEL_KINDS}")
        object.__setattr__(self, "m", dispersion.check_mass(self.m))
        drive = float(self.drive)
        if self.kind == ROTATING:
            if not drive > 0.0 or not math.isfinite(drive):
                raise DomainError("rotating model needs a positive drive frequency")
        else:
            drive = 0.0
        object.__setattr__(self, "drive", drive)

    @classmethod
    def constant(cls, m):
        return cls(CONSTANT, m)

    @classmethod
    def switching(cls, m):
        return cls(SWITCHING, m)

    @classmethod
    def rotating(cls, m, drive):
        return cls(ROTATING, m, drive)

    def elapsed_time(self, extent):
        """Physical time covered by ``extent`` (periods for switching)."""
        return SWITCHING_PERIOD * extent if self.kind == SWITCHING else float(extent)


def _smooth_cutoff(u):
    """C-infinity function of |u|: 1 on [0, 1/2], 0 on [1, inf)."""
    a = np.abs(u)
    s = np.clip(2.0 * a - 1.0, 0.0, 1.0)

    def psi(t):
        safe = np.where(t > 0, t, 1.0)
        return np.where(t > 0, np.exp(-1.0 / safe), 0.0)

    return psi(1.0 - s) / (psi(1.0 - s) + psi(s))


@dataclass(frozen=True)
class Wavepacket:
    """Initial data with Fourier transform weights * envelope((xi - xi_center) / delta)."""

    delta: float
    xi_center: float = 0.0
    weights: tuple = (1.0 + 0j, 0j)
    envelope: str = "bump"

    def __post_init__(self):
        if not float(self.delta) > 0.0:
            raise DomainError("packet half-width delta must be positive")
        if self.envelope not in ENVELOPES:
            raise DomainError(f"unknown envelope {self.envelope!r}")
        w = tuple(complex(v) for v in self.weights)
        if len(w) != 2 or not all(np.isfinite([v.real for v in w] + [v.imag for v in w])):
            raise DomainError("weights must be two finite complex numbers")
        object.__setattr__(self, "delta", float(self.delta))
        object.__setattr__(self, "xi_center", float(self.xi_center))
        object.__setattr__(self, "weights", w)

    @property
    def support(self):
        return self.xi_center - self.delta, self.xi_center + self.delta

    def envelope_at(self, xi):
        u = (np.asarray(xi, dtype=float) - self.xi_center) / self.delta
        inside = np.abs(u) < 1.0
        if self.envelope == "bump":
            safe = np.where(inside, u, 0.0)
            return np.where(inside, np.exp(1.0 - 1.0 / (1.0 - safe * safe)), 0.0)
        return np.where(inside, np.exp(-0.5 * u * u) * _smooth_cutoff(u), 0.0)

    def fourier(self, xi):
        """fhat(xi), shape (2,) + xi.shape."""
        env = self.envelope_at(xi)
        return np.stack([self.weights[0] * env, self.weights[1] * env])


@dataclass(frozen=True)
class SpectralGrid:
    """Uniform grid xi_j = -xi_max + j * dxi, j = 0..n-1, dxi = 2 xi_max / n."""

    xi_max: float
    n: int

    def __post_init__(self):
        if not float(self.xi_max) > 0.0:
            raise ConfigError("xi_max must be positive")
        n = int(self.n)
        if n < 2 or n & (n - 1):
            raise ConfigError(f"grid size must be a power of two, got {self.n!r}")
        object.__setattr__(self, "xi_max", float(self.xi_max))
        object.__setattr__(self, "n", n)

    @property
    def dxi(self):
        return 2.0 * self.xi_max / self.n

    @property
    def xi(self):
        return -self.xi_max + self.dxi * np.arange(self.n)

    @property
    def period(self):
        """Length of the periodic physical domain, 2 pi / dxi."""
        return 2.0 * math.pi / self.dxi

    def doubled(self, widen=True):
        """Twice the points; ``widen`` doubles xi_max (same dxi), else halves dxi."""
        return SpectralGrid(2.0 * self.xi_max if widen else self.xi_max, 2 * self.n)


@dataclass
class SpectralField:
    grid: SpectralGrid
    values: np.ndarray  # shape (n, 2)
    packet: Wavepacket = None
    meta: dict = field(default_factory=dict)

    def l2_norm(self):
        """sqrt((1/2pi) int |fhat|^2 dxi), Riemann sum with exact summation."""
        sq = (self.values.real**2 + self.values.imag**2).ravel()
        return math.sqrt(self.grid.dxi / (2.0 * math.pi) * math.fsum(sq))

    def value_at(self, x):
        """Trigonometric-interpolant value at arbitrary x, shape (2,) + x.shape."""
        x = np.asarray(x, dtype=float)
        phase = np.exp(1j * np.multiply.outer(x, self.grid.xi))
        return np.moveaxis(phase @ self.values, -1, 0) * (self.grid.dxi / (2.0 * math.pi))

    def physical(self, pad=1):
        """Samples (x, alpha) on the periodic domain, x ascending from -L/2.

        ``pad`` > 1 zero-pads the spectrum to refine the x spacing.
        """
        g = self.grid
        total = pad * g.n
        spec = np.zeros((total, 2), dtype=complex)
        spec[: g.n] = self.values
        raw = np.fft.ifft(spec, axis=0) * total
        k = np.fft.fftfreq(total, d=1.0 / total)
        x = k * (g.period / total)
        vals = raw * np.exp(-1j * g.xi_max * x)[:, None] * (g.dxi / (2.0 * math.pi))
        order = np.argsort(x, kind="stable")
        return x[order], vals[order]


def auto_grid(packet, model, extent, x_extent=None):
    """Grid spanning the packet support whose period avoids wrap-around.

    Group speeds are bounded by 1, so after time t the solution occupies
    |x| <= t + x_extent; the period 2 pi / dxi is made at least twice that.
    ``x_extent`` defaults to 600 / delta, which covers the initial packet's
    tail down to roughly 1e-12 of its peak.
    """
    if x_extent is None:
        x_extent = 600.0 / packet.delta
    reach = model.elapsed_time(extent) + x_extent
    xi_max = 1.125 * (abs(packet.xi_center) + packet.delta)
    dxi_max = 2.0 * math.pi / (2.0 * reach)
    n = max(64, 2.0 * xi_max / dxi_max, MIN_SUPPORT_SAMPLES * xi_max / packet.delta)
    return SpectralGrid(xi_max, 1 << int(math.ceil(math.log2(n))))


def make_wavepacket(packet, grid):
    """Sample ``packet`` on ``grid``."""
    lo, hi = packet.support
    xi = grid.xi
    if lo < xi[0] or hi > xi[-1]:
        raise ConfigError(f"grid [{xi[0]}, {xi[-1]}] does not span the support [{lo}, {hi}]")
    inside = int(np.count_nonzero((xi >= lo) & (xi <= hi)))
    if inside < MIN_SUPPORT_SAMPLES:
        raise ConfigError(
            f"grid too coarse: {inside} samples across the support, need {MIN_SUPPORT_SAMPLES}")
    values = packet.fourier(xi).T.copy()
    return SpectralField(grid, values, packet)


def _check_extent(model, extent):
    if model.kind == SWITCHING:
        n = int(extent)
        if n != extent or n < 0:
            raise DomainError(f"switching extent must be a non-negative integer, got {extent!r}")
        return n
    t = float(extent)
    if not t >= 0.0:
        raise DomainError(f"time must be non-negative, got {extent!r}")
    return t


def propagator_batch(model, xi, extent):
    """Propagators at each xi, shape ``xi.shape + (2, 2)``."""
    extent = _check_extent(model, extent)
    xi = np.asarray(xi, dtype=float)
    out = np.zeros(xi.shape + (2, 2), dtype=complex)
    if extent == 0:
        out[..., 0, 0] = out[..., 1, 1] = 1.0
        return out
    m = model.m
    if model.kind == SWITCHING:
        basis = dispersion.eigenbasis(xi, m)
        phase = np.exp(2j * extent * dispersion.theta(xi, m))
        diag = np.stack([phase, phase.conj()], axis=-1)
        return (basis * diag[..., None, :]) @ np.conj(np.swapaxes(basis, -1, -2))
    t = extent
    k = xi + 0.5 * model.drive
    p = np.hypot(k, m)
    c = np.cos(p * t)
    s = np.sin(p * t) / p
    e = np.exp(0.5j * model.drive * t)
    out[..., 0, 0] = e * (c - 1j * k * s)
    out[..., 0, 1] = -1j * m * e * s
    out[..., 1, 0] = -1j * m * np.conj(e) * s
    out[..., 1, 1] = np.conj(e) * (c + 1j * k * s)
    return out


@dataclass(frozen=True)
class PropagatorMatrix:
    xi: float
    extent: float
    matrix: np.ndarray


def propagator(model, xi, extent):
    """2x2 unitary propagator at a single momentum."""
    return PropagatorMatrix(float(xi), extent, propagator_batch(model, float(xi), extent))


def evolve(field, model, extent):
    """Apply the propagator mode by mode."""
    _check_extent(model, extent)
    if extent == 0:
        return replace(field, values=field.values.copy(), meta=dict(field.meta))
    u = propagator_batch(model, field.grid.xi, extent)
    values = np.einsum("nij,nj->ni", u, field.values)
    meta = dict(field.meta, model=model, extent=extent)
    return SpectralField(field.grid, values, field.packet, meta)


def smoothing_weight(xi, r):
    """<xi>^-r = (1 + xi**2)^(-r/2), the symbol of <d/dx>^-r."""
    return (1.0 + np.asarray(xi, dtype=float) ** 2) ** (-0.5 * r)


def smooth(field, r):
    """Apply <d/dx>^-r."""
    if r == 0:
        return field
    w = smoothing_weight(field.grid.xi, r)[:, None]
    return SpectralField(field.grid, field.values * w, field.packet, dict(field.meta, smoothing=r))


def sup_norm(field, pad=16, polish=True, max_candidates=64):
    """max_x |alpha(x)| (Euclidean norm of the two components).

    Taken over the ``pad``-times refined physical grid; with ``polish`` the
    local maxima are then refined on the exact trigonometric interpolant.
    |alpha|**2 is band-limited to [-2 xi_max, 2 xi_max], so by Bernstein's
    inequality a sample within dx/2 of a peak of height F is at least
    F (1 - xi_max dx); every local maximum that could beat the best sample by
    that criterion is polished.
    """
    if not np.any(field.values):
        return 0.0
    x, vals = field.physical(pad)
    amp2 = (np.abs(vals) ** 2).sum(axis=1)
    best2 = float(amp2.max())
    if not polish:
        return math.sqrt(best2)
    dx = x[1] - x[0]
    floor = best2 * max(0.0, 1.0 - field.grid.xi_max * dx)
    peaks = np.nonzero((amp2 >= np.roll(amp2, 1)) & (amp2 >= np.roll(amp2, -1)) & (amp2 >= floor))[0]
    peaks = peaks[np.argsort(amp2[peaks])[::-1][:max_candidates]]

    def neg(xx):
        v = field.value_at(xx)
        return -float((np.abs(v) ** 2).sum())

    for i in peaks:
        res = optimize.minimize_scalar(neg, bounds=(x[i] - dx, x[i] + dx), method="bounded",
                                       options={"xatol": 1e-10 * max(1.0, abs(x[i]))})
        best2 = max(best2, -float(res.fun))
    return math.sqrt(best2)


def evolved_sup_norm(packet, model, extent, grid=None, smoothing=0.0, pad=16):
    grid = grid or auto_grid(packet, model, extent)
    f = smooth(make_wavepacket(packet, grid), smoothing)
    return sup_norm(evolve(f, model, extent), pad=pad)


def check_grid_sufficiency(packet, model, extent, grid=None, smoothing=0.0, rtol=GRID_RTOL):
    """Sup norm on ``grid``, verified against grids with doubled n.

    Doubling n together with xi_max refines the physical sampling; doubling n
    alone doubles the physical period and exposes wrap-around.  Raises
    :class:`GridInsufficientError` if either changes the result by more than
    ``rtol`` relative.
    """
    grid = grid or auto_grid(packet, model, extent)
    base = evolved_sup_norm(packet, model, extent, grid, smoothing)
    for widen in (True, False):
        other = evolved_sup_norm(packet, model, extent, grid.doubled(widen), smoothing)
        scale = max(abs(base), abs(other))
        if scale and abs(other - base) > rtol * scale:
            which = "n and xi_max" if widen else "n"
            raise GridInsufficientError(
                f"doubling {which} changed sup norm from {base!r} to {other!r} "
                f"(grid n={grid.n}, xi_max={grid.xi_max})")
    return base, grid


def _phase_variation(packet, model, extent, x, smoothing):
    lo, hi = packet.support
    xs = np.linspace(lo, hi, 1025)
    if model.kind == SWITCHING:
        th = dispersion.theta(xs, model.m)
        spread = 2.0 * extent * (th.max() - th.min())
    else:
        p = np.hypot(xs + 0.5 * model.drive, model.m)
        spread = extent * (p.max() - p.min())
    return spread + (hi - lo) * abs(x)


def point_eval(packet, model, extent, x, smoothing=0.0, rtol=1e-8):
    """(U(extent) f)(x) by quadrature over the Fourier support of ``packet``.

    Returns a complex array of shape (2,).  Raises
    :class:`~floquet_dirac.errors.QuadratureError` on non-convergence.
    """
    _check_extent(model, extent)
    x = float(x)

    def integrand(xi):
        u = propagator_batch(model, xi, extent)
        fh = packet.fourier(xi)
        if smoothing:
            fh = fh * smoothing_weight(xi, smoothing)
        v = np.einsum("nij,jn->in", u, fh)
        return v * (np.exp(1j * xi * x) / (2.0 * math.pi))

    lo, hi = packet.support
    res = integrate_oscillatory(integrand, lo, hi,
                                _phase_variation(packet, model, extent, x, smoothing),
                                rtol=rtol)
    return res.value


def point_eval_many(packet, model, extents, xs, smoothing=0.0, rtol=1e-8):
    """``point_eval`` over paired (extent, x) lists, evaluated in parallel."""
    pairs = list(zip(extents, xs))
    return parallel_map(lambda ex: point_eval(packet, model, ex[0], ex[1], smoothing, rtol), pairs)


def field_table(field, pad=1):
    """Rows (x, Re a1, Im a1, Re a2, Im a2) of the physical-space snapshot."""
    x, vals = field.physical(pad)
    return np.column_stack([x, vals[:, 0].real, vals[:, 0].imag, vals[:, 1].real, vals[:, 1].imag])


def spectral_table(field):
    """Rows (xi, Re, Im, Re, Im) of the Fourier-space snapshot."""
    v = field.values
    return np.column_stack([field.grid.xi, v[:, 0].real, v[:, 0].imag, v[:, 1].real, v[:, 1].imag])
