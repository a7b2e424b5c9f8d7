import numpy as np
import pytest

from madelung import (
    EdgeField,
    GridSpec,
    charge_chart,
    circulation,
    integer_verdict,
    plaquette_circulation,
    rect_loop,
    total_charge,
    wrap_angle,
)

from helpers import square_spec, unit_vortex

TWO_PI = 2.0 * np.pi


def zero_field(spec):
    return EdgeField(spec, np.zeros(spec.n_edges_x), np.zeros(spec.n_edges_y))


class TestPlaquetteCirculation:
    def test_zero_field(self):
        spec = GridSpec(nx=5, ny=4, hx=1.0, hy=1.0)
        assert np.all(plaquette_circulation(zero_field(spec)) == 0.0)

    def test_constant_per_direction_is_closed(self):
        spec = GridSpec(nx=5, ny=4, hx=1.0, hy=1.0)
        vf = EdgeField(spec, np.full(spec.n_edges_x, 1.3), np.full(spec.n_edges_y, -0.4))
        assert np.allclose(plaquette_circulation(vf), 0.0, atol=1e-15)

    def test_double_vortex_reads_4pi(self):
        spec, _, _, vf = unit_vortex(16, strength=2.0)
        circ = plaquette_circulation(vf)
        center = (spec.ny - 2) // 2, (spec.nx - 2) // 2
        assert circ[7, 7] == pytest.approx(2.0 * TWO_PI, abs=1e-12)
        others = circ.copy()
        others[7, 7] = 0.0
        assert np.max(np.abs(others)) <= 1e-12


class TestChargeChart:
    def test_zero_field(self):
        spec = GridSpec(nx=4, ny=4, hx=1.0, hy=1.0)
        chart = charge_chart(zero_field(spec))
        assert np.all(chart.charges == 0)
        assert np.all(chart.residuals == 0.0)

    def test_unit_vortex(self):
        spec, _, _, vf = unit_vortex(16)
        chart = charge_chart(vf)
        assert chart.charges[7, 7] == 1
        assert abs(chart.residuals[7, 7]) <= 1e-12
        assert np.count_nonzero(chart.charges) == 1

    def test_half_vortex_tie_breaks_to_even_charge(self):
        # 2*pi*alpha = pi at the central plaquette: an exact half tie
        spec, _, _, vf = unit_vortex(8, strength=0.5)
        chart = charge_chart(vf)
        assert chart.charges[3, 3] == 0  # round-half-even picks the even side
        assert abs(chart.residuals[3, 3]) == pytest.approx(np.pi, abs=1e-12)

    def test_decomposition_identity(self, rng):
        spec = GridSpec(nx=7, ny=6, hx=1.0, hy=1.0)
        vf = EdgeField(spec, rng.normal(size=spec.n_edges_x) * 4,
                       rng.normal(size=spec.n_edges_y) * 4)
        chart = charge_chart(vf)
        circ = plaquette_circulation(vf)
        assert np.allclose(TWO_PI * chart.charges + chart.residuals, circ, atol=1e-12)
        assert np.all(chart.residuals <= np.pi)
        assert np.all(chart.residuals >= -np.pi)

    def test_charges_invariant_under_closed_integer_increment(self, rng):
        # adding 2*pi times the coboundary of an integer node potential is a
        # closed integer-valued increment: charges must not move
        spec, _, _, vf = unit_vortex(12)
        m = rng.integers(-3, 4, size=(spec.ny, spec.nx)).astype(float)
        inc_ex = TWO_PI * (m[:, 1:] - m[:, :-1])
        inc_ey = TWO_PI * (m[1:, :] - m[:-1, :])
        shifted = EdgeField(spec, vf.ex + inc_ex.ravel(), vf.ey + inc_ey.ravel())
        assert np.array_equal(charge_chart(shifted).charges, charge_chart(vf).charges)


class TestIntegerVerdict:
    def test_zero_field_quantized(self):
        spec = GridSpec(nx=5, ny=5, hx=1.0, hy=1.0)
        v = integer_verdict(zero_field(spec), rect_loop(spec, (0, 0), (3, 3)), 1e-9)
        assert v.quantized and v.residual == 0.0

    def test_unit_vortex_quantized(self):
        spec, _, _, vf = unit_vortex(16)
        v = integer_verdict(vf, rect_loop(spec, (2, 2), (13, 13)), 1e-9)
        assert v.quantized
        assert v.circulation == pytest.approx(TWO_PI, abs=1e-12)

    def test_half_vortex_violated_with_pi_residual(self):
        spec, _, _, vf = unit_vortex(16, strength=0.5)
        v = integer_verdict(vf, rect_loop(spec, (2, 2), (13, 13)), 1e-9)
        assert not v.quantized
        assert abs(v.residual) == pytest.approx(np.pi, abs=1e-9)

    def test_nonpositive_tol(self):
        spec = GridSpec(nx=4, ny=4, hx=1.0, hy=1.0)
        with pytest.raises(ValueError, match="positive"):
            integer_verdict(zero_field(spec), rect_loop(spec, (0, 0), (1, 1)), 0.0)

    def test_default_tolerance(self):
        spec, _, _, vf = unit_vortex(16)
        assert integer_verdict(vf, rect_loop(spec, (2, 2), (13, 13))).quantized


class TestTotalCharge:
    def test_empty_mask(self):
        spec, _, _, vf = unit_vortex(8)
        chart = charge_chart(vf)
        assert total_charge(chart, np.zeros_like(chart.charges, dtype=bool)) == 0

    def test_full_mask_single_vortex(self):
        spec, _, _, vf = unit_vortex(12)
        chart = charge_chart(vf)
        assert total_charge(chart, np.ones_like(chart.charges, dtype=bool)) == 1

    def test_opposite_pair_cancels(self):
        from madelung import VortexSet, vortex_edge_field

        spec = square_spec(16)
        vs = VortexSet(((-1.0, 0.1), (1.0, 0.1)), (1.0, -1.0))
        chart = charge_chart(vortex_edge_field(spec, vs))
        assert total_charge(chart, np.ones_like(chart.charges, dtype=bool)) == 0
        # and a loop around both sees zero circulation
        vf = vortex_edge_field(spec, vs)
        assert circulation(vf, rect_loop(spec, (1, 1), (14, 14))) == pytest.approx(
            0.0, abs=1e-12
        )

    def test_shape_mismatch(self):
        spec, _, _, vf = unit_vortex(8)
        chart = charge_chart(vf)
        with pytest.raises(ValueError, match="shape"):
            total_charge(chart, np.ones((2, 2), dtype=bool))


class TestStokesConsistency:
    def test_boundary_equals_plaquette_sum(self, rng):
        spec = GridSpec(nx=12, ny=10, hx=0.7, hy=0.3)
        vf = EdgeField(spec, rng.normal(size=spec.n_edges_x),
                       rng.normal(size=spec.n_edges_y))
        circ = plaquette_circulation(vf)
        for _ in range(10):
            i0, i1 = sorted(rng.integers(0, spec.nx, size=2))
            j0, j1 = sorted(rng.integers(0, spec.ny, size=2))
            boundary = circulation(vf, rect_loop(spec, (int(i0), int(j0)), (int(i1), int(j1))))
            enclosed = circ[j0:j1, i0:i1]
            assert boundary == pytest.approx(
                enclosed.sum(), abs=1e-12 * max(1, enclosed.size)
            )

    def test_subloop_closure_bound(self):
        # quantized plaquettes imply every loop is quantized within count*tol
        spec, _, _, vf = unit_vortex(16)
        circ = plaquette_circulation(vf)
        assert np.max(np.abs(wrap_angle(circ))) <= 1e-12
        for corners in (((0, 0), (15, 15)), ((3, 5), (12, 9)), ((6, 6), (9, 9))):
            loop = rect_loop(spec, *corners)
            n_plaq = abs(corners[1][0] - corners[0][0]) * abs(corners[1][1] - corners[0][1])
            residual = wrap_angle(circulation(vf, loop))
            assert abs(residual) <= max(1, n_plaq) * 1e-12
