import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floquet_dirac import dispersion as dp
from floquet_dirac import evolution as ev
from floquet_dirac import oracle
from floquet_dirac.errors import DomainError, OracleError


@pytest.mark.parametrize("model", [ev.MassModel.switching(1.0), ev.MassModel.rotating(1.0, 2.0)])
def test_zero_time_identity(model):
    assert np.array_equal(oracle.mode_oracle(model, 0.4, 0), np.eye(2))


@settings(max_examples=15)
@given(st.floats(-5, 5), st.floats(0.1, 5), st.floats(0.1, 3), st.floats(0.0, 6.0))
def test_unitary(xi, m, w, t):
    u = oracle.mode_oracle(ev.MassModel.rotating(m, w), xi, t)
    assert np.allclose(u @ u.conj().T, np.eye(2), atol=1e-9)


@settings(max_examples=15)
@given(st.floats(-8, 8), st.floats(0.1, 8))
def test_one_period_is_monodromy(xi, m):
    u = oracle.mode_oracle(ev.MassModel.switching(m), xi, 1)
    assert np.allclose(u, dp.monodromy_symbol(xi, m).mhat, atol=1e-8)


def test_negative_time_rejected():
    with pytest.raises(DomainError):
        oracle.mode_oracle(ev.MassModel.constant(1.0), 0.0, -1.0)


def test_solver_failure_is_reported(monkeypatch):
    class Failed:
        success = False
        message = "Required step size is less than spacing between numbers."

    monkeypatch.setattr(oracle, "solve_ivp", lambda *a, **k: Failed())
    with pytest.raises(OracleError, match="step size"):
        oracle.mode_oracle(ev.MassModel.constant(1.0), 0.5, 1.0)
