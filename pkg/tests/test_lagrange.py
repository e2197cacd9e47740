"""Semidiscrete Lagrange model: accelerations, integrators, reference error."""

import math

import numpy as np
import pytest

from wavelattice import (
    DataFunction,
    Domain,
    FrequencyQuadrature,
    integrate,
    phi_reference_error,
    set_initial_data,
)
from wavelattice.dispersion import beta_semidiscrete
from wavelattice.lagrange import rhs, system_for_domain


def _free_system(dx=0.25, half_width=2.0, **kw):
    window = Domain.full_space([(-half_width, half_width)])
    return system_for_domain(window, dx, **kw)


class TestRhs:
    def test_cosine_eigenvector(self):
        # Lap_dx cos(a x) = -beta_0(a, dx)^2 cos(a x) on interior points
        dx, a = 0.25, 2.0
        system = _free_system(dx=dx)
        pts = system._points[..., 0]
        system.values = np.cos(a * pts)
        accel = rhs(system, 0.0)
        expected = -beta_semidiscrete(np.array([a]), dx) ** 2 * system.values
        # skip the window edges, whose stencils reach outside the array
        assert np.allclose(accel[1:-1], expected[1:-1], atol=1e-12)

    def test_sigma_shift_default_sign(self):
        # sigma_sign = -1: accel = Lap - sigma * values
        dx, c = 0.25, 0.3
        plain = _free_system(dx=dx)
        shifted = _free_system(dx=dx, sigma=lambda x: c)
        vals = np.sin(plain._points[..., 0])
        plain.values = vals.copy()
        shifted.values = vals.copy()
        diff = rhs(shifted, 0.0) - rhs(plain, 0.0)
        interior = plain.fieldobj.interior
        assert np.allclose(diff[interior], -c * vals[interior], atol=1e-13)

    def test_sigma_sign_selectable(self):
        dx, c = 0.25, 0.3
        plus = _free_system(dx=dx, sigma=lambda x: c, sigma_sign=+1.0)
        vals = np.sin(plus._points[..., 0])
        plus.values = vals.copy()
        plain = _free_system(dx=dx)
        plain.values = vals.copy()
        diff = rhs(plus, 0.0) - rhs(plain, 0.0)
        interior = plain.fieldobj.interior
        assert np.allclose(diff[interior], c * vals[interior], atol=1e-13)


class TestIntegrate:
    def test_zero_data_stays_zero(self):
        system = _free_system()
        out = integrate(system, 0.0, 1.0, 0.05)
        assert np.all(out[1.0] == 0.0)

    def test_step_must_divide_span(self):
        system = _free_system()
        with pytest.raises(ValueError):
            integrate(system, 0.0, 1.0, 0.3)

    def test_record_times_on_grid(self):
        system = _free_system()
        out = integrate(system, 0.0, 1.0, 0.25, record_times=[0.5, 1.0])
        assert set(out) == {0.5, 1.0}
        with pytest.raises(ValueError):
            integrate(system, 0.0, 1.0, 0.25, record_times=[0.3])

    def test_rk4_close_to_verlet(self):
        f = DataFunction.gaussian([0.0], 0.3)
        g = DataFunction.gaussian([0.1], 0.25, amplitude=0.5)
        h = 0.005
        sys_v = _free_system(dx=0.1)
        set_initial_data(sys_v, f, g)
        out_v = integrate(sys_v, 0.0, 0.5, h, method="stormer_verlet")
        sys_r = _free_system(dx=0.1)
        set_initial_data(sys_r, f, g)
        out_r = integrate(sys_r, 0.0, 0.5, h, method="rk4")
        assert np.max(np.abs(out_v[0.5] - out_r[0.5])) < 5e-5

    def test_unknown_method_rejected(self):
        with pytest.raises(ValueError):
            integrate(_free_system(), 0.0, 1.0, 0.25, method="euler")


class TestReferenceError:
    def test_second_order_decay(self):
        f = DataFunction.gaussian([0.0], 0.3)
        quad = FrequencyQuadrature.for_data(f, T=0.5)
        rows = phi_reference_error(
            f, None, 0.1, [[0.0], [0.2]], 0.5,
            [0.05, 0.025, 0.0125], quad,
        )
        errs = [e for _, e in rows]
        assert errs[0] > errs[1] > errs[2]
        assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.25)
