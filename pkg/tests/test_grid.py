import math

import numpy as np
import pytest

from madelung import (
    ComplexNodeField,
    EdgeField,
    GridSpec,
    NodeField,
    build_node_field,
    edge_midpoint_value,
    gradient_fd,
    weighted_l2,
)

from helpers import unit_vortex


def unit_square_spec(n: int) -> GridSpec:
    return GridSpec(nx=n, ny=n, hx=1.0 / (n - 1), hy=1.0 / (n - 1))


class TestGridSpec:
    def test_node_coordinates(self):
        spec = GridSpec(nx=3, ny=2, hx=0.5, hy=0.25, x0=1.0, y0=-1.0)
        assert spec.node_xy(0, 0) == (1.0, -1.0)
        assert spec.node_xy(2, 1) == (2.0, -0.75)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(nx=1, ny=2, hx=1.0, hy=1.0),
            dict(nx=2, ny=2, hx=0.0, hy=1.0),
            dict(nx=2, ny=2, hx=1.0, hy=-1.0),
            dict(nx=2, ny=2, hx=float("nan"), hy=1.0),
        ],
    )
    def test_invalid_spec_rejected(self, kwargs):
        with pytest.raises(ValueError):
            GridSpec(**kwargs)


class TestBuildNodeField:
    def test_constant_field(self):
        spec = GridSpec(nx=3, ny=3, hx=1.0, hy=1.0)
        f = build_node_field(spec, lambda x, y: 1.0)
        assert f.values.shape == (9,)
        assert np.all(f.values == 1.0)

    def test_linear_field_column(self):
        spec = GridSpec(nx=3, ny=2, hx=0.5, hy=1.0, x0=0.0)
        f = build_node_field(spec, lambda x, y: x)
        # x-column repeats per row in j-major order
        assert np.array_equal(f.grid[0], [0.0, 0.5, 1.0])
        assert np.array_equal(f.grid[1], [0.0, 0.5, 1.0])

    def test_scalar_evaluation_oracle(self):
        spec = GridSpec(nx=2, ny=2, hx=1.0, hy=1.0, x0=1.0, y0=1.0)
        f = build_node_field(spec, lambda x, y: math.tanh(math.hypot(x, y)))
        # node (0,0) sits at (1,1): tanh(sqrt(2))
        assert f.values[0] == pytest.approx(0.8883855615856606, abs=1e-15)
        assert f.values[0] == math.tanh(math.sqrt(2.0))

    def test_no_resampling_drift(self):
        spec = GridSpec(nx=5, ny=4, hx=0.3, hy=0.7, x0=-1.1, y0=2.2)
        seen = {}
        f = build_node_field(spec, lambda x, y: seen.setdefault((x, y), np.sin(x) * y))
        for j in range(spec.ny):
            for i in range(spec.nx):
                assert f.values[spec.flat_index(i, j)] == seen[spec.node_xy(i, j)]

    def test_nonfinite_sample_names_node(self):
        spec = GridSpec(nx=3, ny=3, hx=1.0, hy=1.0)
        with pytest.raises(ValueError, match=r"\(2, 1\)"):
            build_node_field(
                spec, lambda x, y: float("inf") if (x, y) == (2.0, 1.0) else 0.0
            )


class TestFieldValidation:
    def test_node_field_rejects_nan(self):
        spec = GridSpec(nx=2, ny=2, hx=1.0, hy=1.0)
        values = np.zeros(4)
        values[3] = np.nan
        with pytest.raises(ValueError, match="non-finite"):
            NodeField(spec, values)

    def test_complex_field_rejects_inf(self):
        spec = GridSpec(nx=2, ny=2, hx=1.0, hy=1.0)
        values = np.zeros(4, dtype=complex)
        values[1] = complex(0.0, np.inf)
        with pytest.raises(ValueError, match="non-finite"):
            ComplexNodeField(spec, values)

    def test_edge_field_rejects_nan_and_bad_shapes(self):
        spec = GridSpec(nx=3, ny=2, hx=1.0, hy=1.0)
        ex = np.zeros(spec.n_edges_x)
        ey = np.zeros(spec.n_edges_y)
        bad = ex.copy()
        bad[0] = np.nan
        with pytest.raises(ValueError, match="non-finite"):
            EdgeField(spec, bad, ey)
        with pytest.raises(ValueError, match="values"):
            EdgeField(spec, np.zeros(3), ey)
        with pytest.raises(ValueError, match="kind"):
            EdgeField(spec, ex, ey, kind="momentum")

    def test_fields_are_immutable(self):
        spec = GridSpec(nx=2, ny=2, hx=1.0, hy=1.0)
        f = NodeField(spec, np.zeros(4))
        with pytest.raises(ValueError):
            f.values[0] = 1.0


class TestGradient:
    def test_constant_gradient_zero(self):
        spec = unit_square_spec(6)
        f = build_node_field(spec, lambda x, y: 3.25)
        gx, gy = gradient_fd(f)
        assert np.all(gx.values == 0.0)
        assert np.all(gy.values == 0.0)

    def test_linear_field(self):
        spec = unit_square_spec(6)
        f = build_node_field(spec, lambda x, y: x)
        gx, gy = gradient_fd(f)
        assert np.allclose(gx.values, 1.0, atol=1e-12, rtol=0)
        assert np.allclose(gy.values, 0.0, atol=1e-12, rtol=0)

    def test_quadratic_exact_at_interior(self):
        # central difference of x^2 is exact; x=0.5 is node i=2 on 5 nodes
        spec = unit_square_spec(5)
        f = build_node_field(spec, lambda x, y: x * x)
        gx, _ = gradient_fd(f)
        assert gx.grid[2, 2] == pytest.approx(1.0, abs=1e-14)

    def test_affine_exact_everywhere(self, rng):
        spec = GridSpec(nx=7, ny=5, hx=0.31, hy=0.17, x0=-0.4, y0=0.9)
        a, b, c = rng.normal(size=3)
        f = build_node_field(spec, lambda x, y: a + b * x + c * y)
        gx, gy = gradient_fd(f)
        assert np.allclose(gx.values, b, atol=1e-12, rtol=0)
        assert np.allclose(gy.values, c, atol=1e-12, rtol=0)


class TestWeightedL2:
    def test_ones_on_unit_square(self):
        spec = unit_square_spec(11)
        f = build_node_field(spec, lambda x, y: 1.0)
        assert weighted_l2(f) == pytest.approx(1.0, abs=1e-12)

    def test_zero_field(self):
        spec = unit_square_spec(4)
        assert weighted_l2(NodeField(spec, np.zeros(16))) == 0.0

    def test_against_trapezoid_oracle(self):
        # independent composite-trapezoid summation of x^2 over the grid
        spec = unit_square_spec(101)
        f = build_node_field(spec, lambda x, y: x)
        oracle = 0.0
        for j in range(spec.ny):
            wy = 0.5 if j in (0, spec.ny - 1) else 1.0
            for i in range(spec.nx):
                wx = 0.5 if i in (0, spec.nx - 1) else 1.0
                x = spec.x0 + i * spec.hx
                oracle += x * x * wx * wy * spec.hx * spec.hy
        assert weighted_l2(f) ** 2 == pytest.approx(oracle, abs=1e-12)
        # the trapezoid sum itself approximates int x^2 = 1/3
        assert oracle == pytest.approx(1.0 / 3.0, abs=1e-4)

    def test_absolute_homogeneity(self, rng):
        spec = GridSpec(nx=9, ny=6, hx=0.2, hy=0.4)
        g = NodeField(spec, rng.normal(size=spec.n_nodes))
        for c in (-3.7, 0.0, 1e-3, 11.0):
            assert weighted_l2(NodeField(spec, c * g.values)) == pytest.approx(
                abs(c) * weighted_l2(g), abs=1e-12
            )


class TestEdgeMidpointValue:
    def test_division_by_length(self):
        spec = GridSpec(nx=3, ny=3, hx=0.1, hy=0.2)
        ex = np.zeros(spec.n_edges_x)
        ex[0] = 0.2
        vf = EdgeField(spec, ex, np.zeros(spec.n_edges_y))
        assert edge_midpoint_value(vf, "x", 0, 0) == pytest.approx(2.0)
        assert edge_midpoint_value(vf, "x", 1, 0) == 0.0

    def test_out_of_range(self):
        spec = GridSpec(nx=3, ny=3, hx=1.0, hy=1.0)
        vf = EdgeField(spec, np.zeros(spec.n_edges_x), np.zeros(spec.n_edges_y))
        with pytest.raises(ValueError, match="out of range"):
            edge_midpoint_value(vf, "x", 2, 0)
        with pytest.raises(ValueError, match="out of range"):
            edge_midpoint_value(vf, "y", 0, 2)
        with pytest.raises(ValueError, match="axis"):
            edge_midpoint_value(vf, "z", 0, 0)

    def test_vortex_edge_against_quadrature_and_pointwise(self):
        from scipy.integrate import quad

        spec, _, _, vf = unit_vortex(32)
        # an edge far from the center: horizontal edge at i=25, j=28
        i, j = 25, 28
        x0, y0 = spec.node_xy(i, j)
        x1 = x0 + spec.hx

        def integrand(t):
            x = x0 + t * (x1 - x0)
            r2 = x * x + y0 * y0
            # v . dl with dl = (hx, 0): v_x = -y/r^2
            return (-y0 / r2) * (x1 - x0)

        exact, _err = quad(integrand, 0.0, 1.0, epsabs=1e-14, epsrel=1e-13)
        stored = vf.ex[j * (spec.nx - 1) + i]
        assert stored == pytest.approx(exact, abs=1e-12)
        # midpoint value approximates the pointwise tangential field to O(h^2)
        xm = 0.5 * (x0 + x1)
        pointwise = -y0 / (xm * xm + y0 * y0)
        assert edge_midpoint_value(vf, "x", i, j) == pytest.approx(
            pointwise, abs=5.0 * spec.hx**2
        )

    def test_multi_vortex_vertical_edge_against_quadrature(self):
        from scipy.integrate import quad

        from madelung import VortexSet, vortex_edge_field

        spec = GridSpec(nx=24, ny=24, hx=1.0 / 3.0, hy=0.25, x0=-4.0, y0=-3.0)
        vs = VortexSet(((-0.9, 0.15), (1.1, -0.45)), (1.0, -2.0))
        vf = vortex_edge_field(spec, vs)
        i, j = 5, 17
        x0, y0 = spec.node_xy(i, j)
        y1 = y0 + spec.hy

        def integrand(t):
            y = y0 + t * (y1 - y0)
            total = 0.0
            for (cx, cy), s in zip(vs.centers, vs.strengths):
                r2 = (x0 - cx) ** 2 + (y - cy) ** 2
                total += s * (x0 - cx) / r2  # v_y = x/r^2
            return total * (y1 - y0)

        exact, _err = quad(integrand, 0.0, 1.0, epsabs=1e-14, epsrel=1e-13)
        assert vf.ey[j * spec.nx + i] == pytest.approx(exact, abs=1e-12)
