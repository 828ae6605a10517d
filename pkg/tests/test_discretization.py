"""Grids, the discrete Laplacian, quadrature, and bump construction."""

import math

import numpy as np
import pytest

from absorblab import (
    BoundaryCondition,
    DomainKind,
    Field,
    SpatialDomain,
    build_grid,
    bump_function,
    field_to_csv,
    integrate_field,
    laplacian_apply,
    unit_sphere_area,
)

NEU = BoundaryCondition.NEUMANN_ZERO
DIR = BoundaryCondition.DIRICHLET_ZERO


def interval_grid(nodes, extent=1.0):
    return build_grid(SpatialDomain(DomainKind.INTERVAL, extent, 1), nodes)


def radial_grid(nodes, dim_n, extent=1.0):
    return build_grid(SpatialDomain(DomainKind.RADIAL_BALL, extent, dim_n), nodes)


class TestBuildGrid:
    def test_interval_five_nodes(self):
        g = interval_grid(5)
        assert np.allclose(g.coords, [-1, -0.5, 0, 0.5, 1])
        assert g.h == pytest.approx(0.5)

    def test_radial_eleven_nodes(self):
        g = radial_grid(11, 3)
        assert np.allclose(g.coords, np.arange(11) * 0.1)
        assert g.coords[0] == 0.0

    def test_rejects_two_nodes(self):
        with pytest.raises(ValueError):
            interval_grid(2)

    def test_interval_domain_is_one_dimensional(self):
        with pytest.raises(ValueError):
            SpatialDomain(DomainKind.INTERVAL, 1.0, 3)


class TestLaplacian:
    def test_constant_neumann_is_exactly_zero(self):
        g = interval_grid(101)
        lap = laplacian_apply(Field(g, np.full(101, 3.7)), NEU)
        assert np.all(lap.values == 0.0)

    def test_quadratic_interior(self):
        g = interval_grid(101)
        lap = laplacian_apply(Field(g, g.coords**2), NEU)
        assert np.allclose(lap.values[1:-1], 2.0, atol=1e-8)

    def test_sine_eigenfunction_convergence(self):
        errors, hs = [], []
        for nodes in (101, 201, 401):
            g = interval_grid(nodes)
            w = np.sin(np.pi * g.coords)
            lap = laplacian_apply(Field(g, w), DIR)
            exact = -np.pi**2 * w
            errors.append(np.max(np.abs(lap.values[1:-1] - exact[1:-1])))
            hs.append(g.h)
        slope, _ = np.polyfit(np.log(hs), np.log(errors), 1)
        assert slope == pytest.approx(2.0, abs=0.1)

    def test_generic_smooth_function_order_two(self):
        errors, hs = [], []
        for nodes in (101, 201, 401):
            g = interval_grid(nodes)
            x = g.coords
            w = np.exp(np.sin(3 * x))
            exact = (9 * np.cos(3 * x) ** 2 - 9 * np.sin(3 * x)) * w
            lap = laplacian_apply(Field(g, w), NEU)
            errors.append(np.max(np.abs(lap.values[1:-1] - exact[1:-1])))
            hs.append(g.h)
        slope, _ = np.polyfit(np.log(hs), np.log(errors), 1)
        assert slope == pytest.approx(2.0, abs=0.2)

    @pytest.mark.parametrize("dim_n", [1, 2, 3, 5])
    def test_radial_origin_regularity(self, dim_n):
        g = radial_grid(51, dim_n)
        lap = laplacian_apply(Field(g, g.coords**2), NEU)
        assert lap.values[0] == 2.0 * dim_n

    def test_radial_convergence_dim_three(self):
        c = np.pi / 2
        errors, hs = [], []
        for nodes in (101, 201, 401):
            g = radial_grid(nodes, 3)
            r = g.coords
            w = np.cos(c * r)
            lap = laplacian_apply(Field(g, w), NEU)
            exact = -(c**2) * np.cos(c * r)
            exact[1:] -= 2.0 / r[1:] * c * np.sin(c * r[1:])
            exact[0] = -3.0 * c**2
            errors.append(np.max(np.abs(lap.values[:-1] - exact[:-1])))
            hs.append(g.h)
        slope, _ = np.polyfit(np.log(hs), np.log(errors), 1)
        assert slope == pytest.approx(2.0, abs=0.2)

    def test_discrete_green_identity_interval(self):
        # zero-flux walls: the weighted row sums of the stencil telescope away
        rng = np.random.default_rng(3)
        g = interval_grid(257)
        for _ in range(10):
            w = rng.normal(size=257)
            total = integrate_field(laplacian_apply(Field(g, w), NEU))
            assert abs(total) <= 1e-10 * np.max(np.abs(w))


class TestIntegrateField:
    def test_constant_on_interval(self):
        g = interval_grid(101)
        assert integrate_field(Field(g, np.ones(101))) == pytest.approx(2.0, abs=1e-12)

    def test_ball_volume_dim_three(self):
        g = radial_grid(401, 3)
        vol = integrate_field(Field(g, np.ones(401)))
        assert vol == pytest.approx(4 * math.pi / 3, abs=1e-3)

    def test_odd_function_vanishes(self):
        g = interval_grid(101)
        assert integrate_field(Field(g, g.coords)) == pytest.approx(0.0, abs=1e-12)

    def test_weight(self):
        g = interval_grid(401)
        weight = Field(g, g.coords)
        # int x * x^2 over symmetric interval
        assert integrate_field(Field(g, g.coords**2), weight) == pytest.approx(0.0, abs=1e-12)

    def test_grid_mismatch(self):
        g1, g2 = interval_grid(101), interval_grid(102)
        with pytest.raises(ValueError):
            integrate_field(Field(g1, np.ones(101)), Field(g2, np.ones(102)))

    def test_sphere_areas(self):
        assert unit_sphere_area(1) == pytest.approx(2.0)
        assert unit_sphere_area(2) == pytest.approx(2 * math.pi)
        assert unit_sphere_area(3) == pytest.approx(4 * math.pi)


class TestBump:
    def test_unit_integral(self):
        g = interval_grid(401)
        bump = bump_function(g, 0.0, 0.5)
        assert integrate_field(bump) == pytest.approx(1.0, abs=1e-12)

    def test_compact_support_exact_zero(self):
        g = interval_grid(401)
        bump = bump_function(g, 0.2, 0.3)
        outside = np.abs((g.coords - 0.2) / 0.3) >= 1.0
        assert np.all(bump.values[outside] == 0.0)

    def test_even_symmetry(self):
        g = interval_grid(401)
        bump = bump_function(g, 0.0, 0.5)
        assert np.allclose(bump.values, bump.values[::-1], rtol=1e-12, atol=1e-15)

    def test_support_violation(self):
        g = interval_grid(401)
        with pytest.raises(ValueError):
            bump_function(g, 0.8, 0.5)

    def test_radial_centered_bump(self):
        g = radial_grid(401, 3)
        bump = bump_function(g, 0.0, 0.4)
        assert integrate_field(bump) == pytest.approx(1.0, abs=1e-12)

    def test_radial_offcenter_crossing_origin_rejected(self):
        g = radial_grid(401, 3)
        with pytest.raises(ValueError):
            bump_function(g, 0.1, 0.4)


def test_field_requires_matching_length():
    g = interval_grid(101)
    with pytest.raises(ValueError):
        Field(g, np.ones(7))


def test_field_csv_round_trip(tmp_path):
    g = interval_grid(11)
    field = Field(g, np.sin(g.coords))
    path = tmp_path / "field.csv"
    field_to_csv(field, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "coordinate,value"
    assert len(lines) == 12
    x, v = lines[3].split(",")
    assert float(x) == g.coords[2]
    assert float(v) == field.values[2]
