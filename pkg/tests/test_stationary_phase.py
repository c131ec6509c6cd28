import math

import mpmath
import numpy as np
import pytest
from scipy import special

from floquet_dirac import dispersion as dp
from floquet_dirac import evolution as ev
from floquet_dirac import stationary_phase as sp
from floquet_dirac.errors import DomainError, QuadratureError
from floquet_dirac.exceptional_masses import nearest_exceptional_mass

M1 = nearest_exceptional_mass(4.5659).m_k


# -- constants and leading terms --------------------------------------------

def test_airy_constant():
    a = sp.airy_constant()
    assert a == pytest.approx(0.35502805388781723926, abs=1e-15)
    assert 3 ** (2 / 3) * math.gamma(2 / 3) * a == pytest.approx(1.0, abs=1e-12)
    assert a == pytest.approx(special.airy(0.0)[0], rel=1e-14)


def test_phase_profile_validation():
    with pytest.raises(DomainError):
        sp.PhaseProfile.cubic(0.0)
    with pytest.raises(DomainError):
        sp.PhaseProfile.quintic(0.0)
    with pytest.raises(DomainError):
        sp.PhaseProfile(0.0, (0.1, 0.0, 1.0, 0.0, 0.0), sp.ORDER3)
    with pytest.raises(DomainError):
        sp.PhaseProfile(0.0, (0.0, 0.0, 1.0, 0.0, 1.0), sp.ORDER5)
    with pytest.raises(DomainError):
        sp.airy_leading(sp.PhaseProfile.quintic(1.0), 1.0, 10.0)
    with pytest.raises(DomainError):
        sp.quintic_leading(sp.PhaseProfile.cubic(1.0), 1.0, 10.0)
    with pytest.raises(DomainError):
        sp.airy_leading(sp.PhaseProfile.cubic(1.0), 1.0, 0.0)


@pytest.mark.parametrize("w", [1.0, 37.5, 1e4])
def test_power_laws(w):
    c = sp.PhaseProfile.cubic(-2.3)
    q = sp.PhaseProfile.quintic(7.0)
    assert abs(sp.airy_leading(c, 1.0, 2 * w)) / abs(sp.airy_leading(c, 1.0, w)) == pytest.approx(
        2 ** (-1 / 3), rel=1e-14)
    assert abs(sp.quintic_leading(q, 1.0, 2 * w)) / abs(sp.quintic_leading(q, 1.0, w)) == pytest.approx(
        2 ** (-1 / 5), rel=1e-14)


def test_airy_leading_closed_form():
    val = sp.airy_leading(sp.PhaseProfile.cubic(-4.0), 0.5 - 0.25j, 8.0)
    expected = 2 * math.pi * special.airy(0.0)[0] * (0.5 - 0.25j) * (2 / 4.0) ** (1 / 3) / 2.0
    assert val == pytest.approx(expected, rel=1e-14)


def test_quintic_constant_against_mpmath():
    ref = float(mpmath.mpf(2) / 5 * mpmath.gamma(mpmath.mpf(1) / 5) * mpmath.sin(2 * mpmath.pi / 5))
    assert sp.quintic_constant(120.0) == pytest.approx(ref, rel=1e-13)


@pytest.mark.parametrize("c", [0.3, -1.7])
def test_phase_shift_factor(c):
    w = 123.0
    for base, shifted, lead in (
        (sp.PhaseProfile.cubic(1.0), sp.PhaseProfile.cubic(1.0, value=c), sp.airy_leading),
        (sp.PhaseProfile.quintic(5.0), sp.PhaseProfile.quintic(5.0, value=c), sp.quintic_leading),
    ):
        assert lead(shifted, 1.0, w) == pytest.approx(np.exp(1j * c * w) * lead(base, 1.0, w), rel=1e-13)


def test_leading_term_matches_exact_real_line_integral():
    # int exp(i w z^3 / 6) dz over R is the Airy leading term with f = 1
    w = 5.0
    exact = 2 * (6 / w) ** (1 / 3) * math.gamma(4 / 3) * math.cos(math.pi / 6)
    assert abs(sp.airy_leading(sp.PhaseProfile.cubic(1.0), 1.0, w)) == pytest.approx(exact, rel=1e-13)


# -- quadrature convergence on model phases ---------------------------------

def test_cubic_model_phase_converges():
    rows = sp.model_phase_check(3, [1e2, 1e3, 1e4])
    errs = [r.rel_error for r in rows]
    assert errs[0] > errs[1] > errs[2]
    assert errs[-1] <= 0.02
    order = -np.polyfit(np.log([r.omega for r in rows]), np.log(errs), 1)[0]
    assert order >= 1 / 3


def test_quintic_model_phase_converges():
    rows = sp.model_phase_check(5, [1e2, 1e3, 1e4])
    errs = [r.rel_error for r in rows]
    assert errs[0] > errs[1] > errs[2]
    assert errs[-1] <= 0.02
    order = -np.polyfit(np.log([r.omega for r in rows]), np.log(errs), 1)[0]
    assert order >= 1 / 5


def test_quintic_exponent_pinned():
    # lam = z^5 / 120 separates the two candidate signs by a factor 120**(2/5)
    plus = sp.model_phase_check(5, [1e4], d_lead=1.0, half_width=2.0)[0]
    minus = sp.model_phase_check(5, [1e4], d_lead=1.0, half_width=2.0, k_exponent=-0.2)[0]
    assert sp.QUINTIC_K_EXPONENT == 0.2
    assert plus.rel_error <= 0.02
    assert minus.rel_error > 0.5


def test_quintic_derivative_scaling():
    ratio = sp.quintic_constant(32 * 7.0) / sp.quintic_constant(7.0)
    assert ratio == pytest.approx(0.5, rel=1e-14)


def test_model_phase_check_validation():
    with pytest.raises(DomainError):
        sp.model_phase_check(4, [1e2])
    with pytest.raises(DomainError):
        sp.model_phase_check(3, [1e2, -1.0])


# -- the degenerate phase ----------------------------------------------------

def test_s_zero():
    assert sp.s_zero(1.0) == pytest.approx(-1.6829420, abs=1e-7)
    assert sp.s_zero(1.0) == pytest.approx(-2 * math.sin(1.0), rel=1e-15)
    assert sp.s_zero(math.pi) == pytest.approx(0.0, abs=1e-15)
    for m in (0.3, 2.0, 9.1):
        assert sp.s_zero(m) == -2.0 * dp.theta_derivs_at_zero(m).d1


@pytest.mark.parametrize("m", [0.5, 1.0, 2.0, 4.5659, 7.7681])
def test_big_theta_degenerate_at_origin(m):
    for numeric in (False, True):
        d = sp.big_theta_derivs(m, numeric=numeric)
        assert abs(d[0]) <= 1e-10 and abs(d[1]) <= 1e-10


def test_exceptional_masses_triply_degenerate():
    for e in (M1, nearest_exceptional_mass(7.7681).m_k):
        d = sp.big_theta_derivs(e, numeric=True)
        assert all(abs(v) <= 1e-10 for v in d[:2])
        assert abs(d[2]) <= 1e-8 and abs(d[3]) <= 1e-8
        assert abs(d[4]) > 1e-3


def test_big_theta_definition():
    xi = np.linspace(-3, 3, 13)
    assert np.allclose(sp.big_theta(xi, 1.0), xi * sp.s_zero(1.0) + 2 * dp.theta(xi, 1.0), atol=0)


def test_classify_mass():
    assert sp.classify_mass(1.0) == sp.GENERIC
    assert sp.classify_mass(4.5659) == sp.EXCEPTIONAL
    assert sp.classify_mass(M1 + 2e-3) == sp.GENERIC
    assert sp.classify_mass(26.6785) == sp.EXCEPTIONAL


def test_phase_profile_classes():
    assert sp.phase_profile(1.0).order == sp.ORDER3
    assert sp.phase_profile(M1).order == sp.ORDER5
    with pytest.raises(DomainError):
        sp.phase_profile(1.0, "mystery")


# -- predicted peaks ---------------------------------------------------------

def test_predicted_peak_power_laws():
    packet = ev.Wavepacket(1.0)
    g = sp.predicted_peak(1.0, packet, 100) / sp.predicted_peak(1.0, packet, 800)
    e = sp.predicted_peak(M1, packet, 100) / sp.predicted_peak(M1, packet, 800)
    assert np.allclose(g, 8 ** (1 / 3), rtol=1e-13)
    assert np.allclose(e, 8 ** (1 / 5), rtol=1e-13)


def test_predicted_peak_is_real_multiple_of_projection():
    # theta(0) = 0, so the Floquet phase factor is 1
    packet = ev.Wavepacket(1.0, weights=(0.6, 0.8j))
    val = sp.predicted_peak(1.0, packet, 64)
    p = dp.eigenbasis(0.0, 1.0)[:, 0]
    proj = p * (np.conj(p) @ packet.fourier(np.array([0.0]))[:, 0])
    ratio = val / proj
    assert np.allclose(ratio.imag, 0.0, atol=1e-15)
    assert ratio.real[0] == pytest.approx(ratio.real[1], rel=1e-13) and ratio.real[0] > 0


@pytest.mark.parametrize("delta,tol", [(0.2, 0.15), (1.0, 0.01)])
def test_predicted_peak_against_point_eval(delta, tol):
    m, n = 1.0, 2048
    packet = ev.Wavepacket(delta)
    model = ev.MassModel.switching(m)
    actual = np.linalg.norm(ev.point_eval(packet, model, n, n * sp.s_zero(m)))
    pred = np.linalg.norm(sp.predicted_peak(m, packet, n))
    assert abs(pred - actual) / actual <= tol


def test_predicted_peak_exceptional_against_point_eval():
    n = 16384
    packet = ev.Wavepacket(3.0)
    actual = np.linalg.norm(ev.point_eval(packet, ev.MassModel.switching(M1), n, n * sp.s_zero(M1)))
    pred = np.linalg.norm(sp.predicted_peak(M1, packet, n))
    assert abs(pred - actual) / actual <= 0.01


def test_bare_form_does_not_match():
    m, n = 1.0, 2048
    packet = ev.Wavepacket(1.0)
    actual = np.linalg.norm(ev.point_eval(packet, ev.MassModel.switching(m), n, n * sp.s_zero(m)))
    bare = np.linalg.norm(sp.predicted_peak(m, packet, n, form="bare"))
    assert bare < 0.2 * actual


def test_predicted_peak_errors():
    packet = ev.Wavepacket(1.0)
    with pytest.raises(DomainError):
        sp.predicted_peak(1.0, packet, 10, kind=sp.EXCEPTIONAL)
    with pytest.raises(DomainError):
        sp.predicted_peak(M1, packet, 10, kind=sp.GENERIC)
    with pytest.raises(DomainError):
        sp.predicted_peak(1.0, packet, 0)
    with pytest.raises(DomainError):
        sp.predicted_peak(1.0, packet, 10, form="other")


# -- decay fits --------------------------------------------------------------

def test_fit_loglog_exact_power():
    xs = 2.0 ** np.arange(7)
    slope, intercept, stderr, r2 = sp.fit_loglog(xs, 3 * xs**-0.4)
    assert slope == pytest.approx(-0.4, abs=1e-12)
    assert intercept == pytest.approx(math.log(3), abs=1e-12)
    assert r2 == pytest.approx(1.0)


def test_fit_decay_generic_peak():
    ns = [128 * 2**k for k in range(8)]
    fit = sp.fit_decay(ev.MassModel.switching(1.0), ev.Wavepacket(2.0), ns)
    assert fit.exponent == pytest.approx(-1 / 3, abs=0.03)
    assert fit.r_squared >= 0.995
    assert fit.probe == "peak" and fit.discarded == 2
    assert np.allclose(fit.amplitudes[-1], fit.predicted[-1], rtol=0.01)


@pytest.mark.parametrize("delta", [2.0, 3.0])
def test_fit_decay_exceptional_peak(delta):
    ns = [128 * 2**k for k in range(8)]
    fit = sp.fit_decay(ev.MassModel.switching(4.5659), ev.Wavepacket(delta), ns)
    assert fit.exponent == pytest.approx(-1 / 5, abs=0.03)
    assert fit.r_squared >= 0.995


def test_fit_decay_rotating_sup():
    ts = [16 * 2**k for k in range(9)]
    fit = sp.fit_decay(ev.MassModel.rotating(1.0, 1.0), ev.Wavepacket(2.0), ts)
    assert fit.probe == "sup"
    assert fit.exponent == pytest.approx(-1 / 2, abs=0.05)
    assert fit.r_squared >= 0.995
    assert all(math.isnan(p) for p in fit.predicted)


def test_fit_decay_validation():
    model = ev.MassModel.switching(1.0)
    packet = ev.Wavepacket(1.0)
    with pytest.raises(DomainError, match="at least 5"):
        sp.fit_decay(model, packet, [128, 256, 512, 1024])
    with pytest.raises(DomainError, match="decades"):
        sp.fit_decay(model, packet, [10, 11, 12.1, 13.31, 14.641])
    with pytest.raises(DomainError, match="geometric"):
        sp.fit_decay(model, packet, [1, 2, 4, 8, 100])
    with pytest.raises(DomainError):
        sp.fit_decay(ev.MassModel.rotating(1.0, 1.0), packet, [16, 32, 64, 128, 256, 512, 1024, 2048], probe="peak")
    with pytest.raises(DomainError):
        sp.fit_decay(model, packet, [1, 2, 4, 8, 16, 32, 64, 128], probe="mean")


def test_fit_decay_quadrature_failure_propagates(monkeypatch):
    def broken(packet, model, extent, x, smoothing=0.0, rtol=1e-8):
        if extent == 512:
            raise QuadratureError("no convergence", {"panels": 7})
        return np.array([1.0 / extent, 0.0])

    monkeypatch.setattr(sp, "point_eval", broken)
    with pytest.raises(QuadratureError, match="n=512") as info:
        sp.fit_decay(ev.MassModel.switching(1.0), ev.Wavepacket(1.0), [128 * 2**k for k in range(8)])
    assert info.value.diagnostics["n"] == 512


# -- van der Corput scaling --------------------------------------------------

OMEGAS = [1e2, 1e3, 1e4, 1e5]


def test_vdc_constants():
    assert [sp.vdc_constant(k) for k in (1, 2, 3, 5)] == [3.0, 8.0, 18.0, 78.0]


def test_vdc_generic_bounded():
    r = sp.vdc_scaling_check("generic", 1.0, OMEGAS)
    assert r.k == 3 and r.bounded
    assert abs(r.growth_exponent) < 0.05
    assert r.max_s <= r.vdc_bound


def test_vdc_exceptional_bounded():
    r = sp.vdc_scaling_check("exceptional", M1, OMEGAS)
    assert r.k == 5 and r.bounded
    assert r.max_s <= r.vdc_bound


def test_vdc_linear_control():
    r = sp.vdc_scaling_check("linear", None, OMEGAS)
    assert r.k == 1
    assert r.max_s <= r.vdc_bound


def test_vdc_wrong_order_grows():
    r = sp.vdc_scaling_check("generic", 1.0, OMEGAS, k=2)
    assert r.growth_exponent == pytest.approx(1 / 2 - 1 / 3, abs=0.03)
    assert not r.bounded


def test_vdc_half_width_keeps_derivative_away_from_zero():
    h = sp.vdc_half_width(M1, 5)
    xs = np.linspace(-h, h, 201)
    d5 = np.abs(2 * dp.theta_derivative(xs, M1, 5))
    assert 0.5 < h < 1.4
    assert d5.min() >= 0.5 * abs(2 * dp.theta_derivs_at_zero(M1).d5)


def test_vdc_validation():
    with pytest.raises(DomainError):
        sp.vdc_scaling_check("generic", 1.0, [1e2, 1e3, 1e4])
    with pytest.raises(DomainError):
        sp.vdc_scaling_check("generic", 1.0, [1e2, 1e3, 1e4, 2e5])
    with pytest.raises(DomainError):
        sp.vdc_scaling_check("cubic", 1.0, OMEGAS)
