"""Leapfrog stepper: bootstrap exactness, recording modes, guards."""

import math

import numpy as np
import pytest

from wavelattice import (
    BlowupError,
    DataFunction,
    DiscreteProblem,
    Domain,
    LatticeSpec,
    solve,
)
from wavelattice.leapfrog import bootstrap, required_padding, step


def _full_space_problem(**kw):
    spec = kw.pop("spec", LatticeSpec(1, 0.1, 0.05, 0.4))
    domain = Domain.full_space([(-0.5, 0.5)])
    return DiscreteProblem(spec=spec, domain=domain, **kw)


class TestBootstrap:
    def test_constant_data_stays_constant(self):
        problem = _full_space_problem(f=lambda x: 2.5)
        fld = solve(problem, record="full", t_range=(0.0, problem.spec.T))
        for level in range(problem.spec.steps + 1):
            assert np.all(fld.level_array(level) == 2.5)

    def test_linear_in_time(self):
        # f = 0, g = c: the scheme reproduces u = c t exactly
        c = 0.7
        problem = _full_space_problem(g=lambda x: c)
        spec = problem.spec
        fld = solve(problem, record="full", t_range=(0.0, spec.T))
        for level in range(spec.steps + 1):
            assert np.allclose(fld.level_array(level), c * level * spec.dt,
                               atol=1e-13)

    def test_zero_data_zero_history(self):
        problem = _full_space_problem()
        fld = solve(problem, record="full", t_range=(0.0, problem.spec.T))
        for level in range(problem.spec.steps + 1):
            assert np.all(fld.level_array(level) == 0.0)


class TestSolve:
    def test_inadmissible_spec_rejected(self):
        spec = LatticeSpec(1, 0.1, 0.2, 0.4)  # ratio 2 > 1
        assert not spec.admissible()
        with pytest.raises(ValueError):
            DiscreteProblem(spec=spec, domain=Domain.full_space([(-0.5, 0.5)]))

    def test_t_range_must_hit_lattice_times(self):
        problem = _full_space_problem()
        with pytest.raises(ValueError):
            solve(problem, t_range=(0.0, 0.33))

    def test_window_and_full_agree_at_final_level(self):
        f = DataFunction.gaussian([0.0], 0.1)
        g = DataFunction.gaussian([0.05], 0.12, amplitude=0.4)
        full = solve(_full_space_problem(f=f, g=g), record="full",
                     t_range=(0.0, 0.4))
        window = solve(_full_space_problem(f=f, g=g), record="window",
                       t_range=(0.0, 0.4))
        steps = 8
        assert np.array_equal(full.level_array(steps),
                              window.level_array(steps))

    def test_backward_symmetry_with_zero_velocity(self):
        # g = 0 makes the discrete evolution time-symmetric: v^{-m} = v^m
        f = DataFunction.gaussian([0.0], 0.1)
        fld = solve(_full_space_problem(f=f), record="full")
        steps = 8
        assert np.allclose(fld.level_array(-steps), fld.level_array(steps),
                           atol=1e-12)

    def test_blowup_detected(self):
        # seed far above the finite threshold; one step trips the guard
        problem = _full_space_problem(f=lambda x: 1e13)
        with pytest.raises(BlowupError):
            solve(problem, record="window", t_range=(0.0, 0.4))

    def test_box_boundary_clamped(self):
        spec = LatticeSpec(1, 0.1, 0.05, 0.4)
        problem = DiscreteProblem(
            spec=spec, domain=Domain.box([(0.0, 1.0)]),
            f=DataFunction.gaussian([0.5], 0.08), boundary_value=0.0,
        )
        fld = solve(problem, record="full", t_range=(0.0, spec.T))
        arr = fld.level_array(spec.steps)
        assert arr[0] == 0.0 and arr[-1] == 0.0

    def test_variable_coefficients_rejected(self):
        spec = LatticeSpec(1, 0.1, 0.05, 0.4)
        with pytest.raises(ValueError):
            DiscreteProblem(spec=spec, domain=Domain.box([(0.0, 1.0)]),
                            a=lambda x: 1.1)


class TestPadding:
    def test_required_padding_covers_dependence_cone(self):
        spec = LatticeSpec(1, 0.1, 0.05, 0.4)
        assert required_padding(spec, steps=8) >= 8

    def test_manual_stepping_matches_solve(self):
        f = DataFunction.gaussian([0.0], 0.1)
        problem = _full_space_problem(f=f)
        spec = problem.spec
        fld = bootstrap(problem, pad=required_padding(spec, spec.steps))
        for _ in range(spec.steps - 1):
            step(problem, fld)
        ref = solve(_full_space_problem(f=f), record="full",
                    t_range=(0.0, spec.T))
        assert np.array_equal(fld.level_array(spec.steps),
                              ref.level_array(spec.steps))
