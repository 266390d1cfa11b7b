"""Compiled and pure-Python kernels must agree to the last few ulps."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cartwin.dynamics import AxleTires, VehicleParams
from cartwin.dynamics.backend import available_backends
from cartwin.dynamics.model import tire_tuple, veh_tuple

BACKENDS = available_backends()
needs_both = pytest.mark.skipif(len(BACKENDS) < 2,
                                reason="compiled kernel not built")


def _packs():
    p, t = VehicleParams(), AxleTires()
    return veh_tuple(p), tire_tuple(p, t)


@needs_both
@settings(max_examples=100, deadline=None)
@given(vx=st.floats(0.0, 36.0), vy=st.floats(-3.0, 3.0), r=st.floats(-1.0, 1.0),
       psi=st.floats(-3.0, 3.0), delta=st.floats(-0.5, 0.5),
       fx=st.floats(-2e4, 2e4))
def test_derivative_parity(vx, vy, r, psi, delta, fx):
    veh, tire = _packs()
    s = (0.5, -1.0, psi, vx, vy, r)
    outs = [b.derivative(s, delta, fx, veh, tire) for b in BACKENDS.values()]
    for a, b in zip(*outs):
        assert math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12)


@needs_both
def test_simulate_parity_and_trace_shape():
    veh, tire = _packs()
    ctrl = (1, 0.0, 0.03, 0.7, 15.0, 0.1, 5000.0, 40000.0, 296.6, 0.6217)
    s0 = (0.0, 0.0, 0.0, 15.0, 0.0, 0.0)
    results = {}
    for name, b in BACKENDS.items():
        times, states, n, ok = b.simulate(s0, veh, tire, ctrl, 1e-3, 5000, 10)
        assert ok and n == 5000
        assert times.shape == (501,) and states.shape == (501, 6)
        results[name] = states
    a, b = results["python"], results["compiled"]
    assert np.max(np.abs(a - b)) <= 1e-10 * max(1.0, np.max(np.abs(b)))


@needs_both
def test_step_once_parity():
    veh, tire = _packs()
    s = (1.0, 2.0, 0.1, 22.0, -0.4, 0.15)
    outs = [b.step_once(s, 0.04, 800.0, 1e-3, veh, tire) for b in BACKENDS.values()]
    for a, b in zip(*outs):
        assert math.isclose(a, b, rel_tol=1e-13, abs_tol=1e-13)


def test_selected_backend_is_deterministic():
    from cartwin.dynamics.backend import kernel

    veh, tire = _packs()
    ctrl = (0, 0.02, 0.0, 0.0, 10.0, 0.0, 5000.0, 40000.0, 296.6, 0.6217)
    s0 = (0.0, 0.0, 0.0, 10.0, 0.0, 0.0)
    _, s1, _, _ = kernel.simulate(s0, veh, tire, ctrl, 1e-3, 3000)
    _, s2, _, _ = kernel.simulate(s0, veh, tire, ctrl, 1e-3, 3000)
    assert np.array_equal(s1, s2)
