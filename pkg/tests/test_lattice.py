import math

import numpy as np
import pytest

from wavelattice import (
    AmbiguousBoundaryError,
    DataFunction,
    Domain,
    LatticeSpec,
    check_compatibility,
    classify,
    detect_double_points,
    is_admissible,
    refine_halving,
)


class TestAdmissibility:
    def test_admissible_2d(self):
        assert is_admissible(LatticeSpec(2, 0.2, 0.1, 1.0))

    def test_cfl_violated(self):
        assert not is_admissible(LatticeSpec(4, 0.1, 0.1, 1.0))

    def test_integrality_violated(self):
        assert not is_admissible(LatticeSpec(1, 0.2, 0.15, 1.0))

    def test_boundary_ratio_allowed(self):
        assert is_admissible(LatticeSpec(1, 0.1, 0.1, 1.0))

    def test_steps(self):
        assert LatticeSpec(1, 0.2, 0.1, 1.0).steps == 10


class TestRefineHalving:
    def test_two_levels(self):
        fam = refine_halving(LatticeSpec(1, 0.2, 0.1, 1.0), 3)
        assert [(s.dx, s.dt) for s in fam] == [(0.2, 0.1), (0.1, 0.05), (0.05, 0.025)]
        assert all(s.admissible() for s in fam)

    def test_zero_levels_rejected(self):
        with pytest.raises(ValueError):
            refine_halving(LatticeSpec(1, 0.2, 0.1, 1.0), 0)

    def test_non_admissible_rejected(self):
        with pytest.raises(ValueError):
            refine_halving(LatticeSpec(1, 0.2, 0.15, 1.0), 2)

    def test_nested_points(self):
        coarse, fine = refine_halving(LatticeSpec(1, 0.25, 0.125, 1.0), 2)
        # coarse lattice coordinates reproduce bit-identically on the fine one
        for i in range(-4, 5):
            assert i * coarse.dx == (2 * i) * fine.dx


class TestClassify:
    def test_interval(self):
        cls = classify(Domain.box([(0, 1)]), LatticeSpec(1, 0.25, 0.1, 1.0))
        assert cls.interior == {(1,), (2,), (3,)}
        assert cls.boundary == {(0,), (4,)}

    def test_unit_box_2d(self):
        cls = classify(Domain.box([(0, 1), (0, 1)]), LatticeSpec(2, 0.5, 0.2, 1.0))
        assert cls.interior == {(1, 1)}
        assert len(cls.boundary) == 8
        assert cls.interior.isdisjoint(cls.boundary)

    def test_ball_brute_force(self):
        dom = Domain.ball((0.0, 0.0), 1.0)
        spec = LatticeSpec(2, 0.4, 0.1, 1.0)
        cls = classify(dom, spec)
        dx = spec.dx

        def inside(i, j):
            return (i * dx) ** 2 + (j * dx) ** 2 < 1.0

        def closure(i, j):
            r = math.hypot(i * dx, j * dx)
            return inside(i, j) or r == 1.0

        interior, boundary = set(), set()
        for i in range(-4, 5):
            for j in range(-4, 5):
                if not closure(i, j):
                    continue
                nbs = [(i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)]
                if inside(i, j) and all(closure(*nb) for nb in nbs):
                    interior.add((i, j))
                elif not all(closure(*nb) for nb in nbs):
                    boundary.add((i, j))
        assert cls.interior == interior
        assert cls.boundary == boundary

    def test_full_space_window(self):
        cls = classify(Domain.full_space([(-0.5, 0.5)]), LatticeSpec(1, 0.25, 0.1, 1.0))
        assert cls.boundary == set()
        assert (0,) in cls.interior and (2,) in cls.interior

    def test_ambiguous_boundary(self):
        # the lattice point at 0.3 sits within 1e-12*dx of the boundary
        # without lying on it (0.1 * 3 = 0.30000000000000004 in binary)
        dom = Domain.box([(-1.0, 0.3 + 1e-14)])
        with pytest.raises(AmbiguousBoundaryError):
            classify(dom, LatticeSpec(1, 0.1, 0.05, 1.0))


class TestDoublePoints:
    def test_box_empty(self):
        assert detect_double_points(
            Domain.box([(0, 1), (0, 1)]), LatticeSpec(2, 0.25, 0.1, 1.0)
        ) == set()

    def test_ball_empty(self):
        assert detect_double_points(
            Domain.ball((0.0, 0.0), 1.0), LatticeSpec(2, 0.25, 0.1, 1.0)
        ) == set()

    def test_touching_corner_flagged(self):
        dom = Domain.union(
            Domain.box([(-1.0, 0.0), (-1.0, 0.0)]),
            Domain.box([(0.0, 1.0), (0.0, 1.0)]),
        )
        suspects = detect_double_points(dom, LatticeSpec(2, 0.25, 0.1, 1.0))
        assert (0, 0) in {tuple(int(round(c / 0.25)) for c in p) for p in suspects}


class TestCompatibility:
    def test_zero_data_pass(self):
        rep = check_compatibility(None, None, None, Domain.box([(0, 1)]), tol=1e-12)
        assert rep.passed
        assert rep.max_f_mismatch == 0.0

    def test_constant_mismatch(self):
        rep = check_compatibility(
            lambda x: 1.0, None, None, Domain.box([(0, 1)]), tol=1e-10
        )
        assert not rep.passed
        assert abs(rep.max_f_mismatch - 1.0) < 1e-14

    def test_vanishing_gaussian_passes(self):
        f = DataFunction.gaussian([0.5, 0.5], 0.05)
        g = DataFunction.gaussian([0.5, 0.5], 0.04, amplitude=0.5)
        rep = check_compatibility(
            f, g, None, Domain.box([(0, 1), (0, 1)]), tol=1e-10
        )
        assert rep.passed
