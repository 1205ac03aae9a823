"""Constant-layer tests.

Expected values were frozen from an independent evaluation of each closed
form (straight arithmetic, cross-checked against the displayed formulas)
before the implementation was written.
"""

import math

import numpy as np
import pytest

from exitbounds import constants as cst
from exitbounds import geometry


class TestBdgConstants:
    def test_canonical_half(self):
        pair = cst.bdg_constants(0.5, "canonical")
        assert pair.c_lower == pytest.approx(0.42857142857142855, rel=1e-12)
        assert pair.C_upper == pytest.approx(2.3333333333333335, rel=1e-12)

    def test_best_half(self):
        pair = cst.bdg_constants(0.5, "best")
        assert pair.c_lower == pytest.approx(1.0606601717798214, rel=1e-12)
        assert pair.C_upper == pytest.approx(1.885618083164127, rel=1e-12)

    def test_best_alpha_three(self):
        # only the linear variant is admissible for alpha >= 2
        pair = cst.bdg_constants(3.0, "best")
        assert pair.c_lower == pytest.approx(1.0 / (6.0 * math.sqrt(2.0)), rel=1e-12)
        assert pair.C_upper == pytest.approx(6.0 * math.sqrt(2.0), rel=1e-12)
        assert pair.variants_used == ("linear", "linear")

    def test_canonical_above_two_uses_linear(self):
        pair = cst.bdg_constants(2.0, "canonical")
        assert pair.c_lower == pytest.approx(1.0 / (4.0 * math.sqrt(2.0)), rel=1e-12)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            cst.bdg_constants(0.0)
        with pytest.raises(ValueError):
            cst.bdg_constants(-1.0)

    def test_best_dominates_canonical(self):
        for a in np.linspace(0.05, 3.5, 50):
            can = cst.bdg_constants(float(a), "canonical")
            best = cst.bdg_constants(float(a), "best")
            assert best.c_lower >= can.c_lower - 1e-15
            assert best.C_upper <= can.C_upper + 1e-15


class TestMultidimBdg:
    def test_values(self):
        assert cst.multidim_bdg_constant(0.5, 2, "canonical") == pytest.approx(3.36359, abs=1e-4)
        assert cst.multidim_bdg_constant(2.0, 3, "best") == pytest.approx(50.9117, abs=1e-3)
        assert cst.multidim_bdg_constant(0.5, 1, "canonical") == pytest.approx(2.33333, abs=1e-4)

    def test_small_alpha_takes_min(self):
        d, a = 2, 0.5
        lenglart = d ** (a / 2.0) * a ** (-a) / (1.0 - a)
        base = d * cst.bdg_constants(a, "canonical").C_upper
        assert cst.multidim_bdg_constant(a, d, "canonical") == pytest.approx(min(lenglart, base))


class TestUniformMomentConstant:
    def test_values(self):
        assert cst.uniform_moment_constant(1.0, 4) == pytest.approx(0.25)
        assert cst.uniform_moment_constant(0.5, 2) == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-12)
        # alpha = 2, d = 2: (1/c_2) * 4 * 2^-1 with c_2 = 1/(4 sqrt 2)
        assert cst.uniform_moment_constant(2.0, 2) == pytest.approx(8.0 * math.sqrt(2.0), rel=1e-12)


class TestSourceConstant:
    def test_d2_values(self):
        assert cst.source_constant(2, 1.0, 4.0, 2.0) == pytest.approx(0.33546913348270696, rel=1e-10)
        assert cst.source_constant(2, 2.0, 4.0, 2.0) == pytest.approx(0.4744249983287944, rel=1e-10)

    def test_d3_value(self):
        assert cst.source_constant(3, 1.0, 3.0, 1.5) == pytest.approx(0.4301270069140498, rel=1e-10)

    def test_diameter_scaling_exact(self):
        # doubling diam multiplies by exactly 2^((2 gamma - q d)/(gamma q))
        cases = [(2, 4.0, 2.0), (3, 3.0, 1.5), (3, 6.0, 2.0), (5, 9.0, 3.0)]
        for d, g, q in cases:
            expo = (2.0 * g - q * d) / (g * q)
            ratio = cst.source_constant(d, 2.0, g, q) / cst.source_constant(d, 1.0, g, q)
            assert ratio == pytest.approx(2.0 ** expo, rel=1e-12)

    def test_vacuous_bound_rejected(self):
        with pytest.raises(ValueError):
            cst.source_constant(3, 1.0, 3.0, 2.0)  # 2*3 - 2*3 = 0


class TestSphereConstant:
    def test_reference_value(self):
        assert cst.sphere_constant(0.5, 2, 2.0, 1.0, "canonical") == pytest.approx(
            111.11303595202727, rel=1e-10
        )

    def test_thin_annulus_value(self):
        # frozen from the independent formula evaluation; the bracket's
        # (R-r)^(a/2) term is 0.1 * 2^0.25 here
        assert cst.sphere_constant(0.5, 2, 1.0001, 1.0, "canonical") == pytest.approx(
            105.17763937750681, rel=1e-10
        )

    def test_small_alpha_continuity(self):
        # as alpha -> 0+ the formula tends to C(a,d) e^a (4/c_a + d^(a/2) ((R-r)/r)^(a/2)) + 1
        a = 1e-8
        val = cst.sphere_constant(a, 2, 2.0, 1.0, "canonical")
        c_a = cst.bdg_constants(a, "canonical").c_lower
        lim = cst.multidim_bdg_constant(a, 2) * math.exp(a) * (
            4.0 / ((1.0 - a) * c_a) + (1.0) ** (a / 2.0) * 2.0 ** (a / 2.0)
        ) + 1.0
        assert val == pytest.approx(lim, rel=1e-12)

    def test_geometry_error(self):
        with pytest.raises(ValueError):
            cst.sphere_constant(0.5, 2, 1.0, 1.0)


class TestAngles:
    def test_tilde_omega(self):
        assert cst.tilde_omega(0.0) == pytest.approx(0.5)
        assert cst.tilde_omega(math.pi / 2.0) == pytest.approx(1.0)
        assert cst.tilde_omega(math.pi / 4.0) == pytest.approx(2.0 / 3.0, rel=1e-12)
        with pytest.raises(ValueError):
            cst.tilde_omega(math.pi)

    def test_tilde_omega_monotone_and_range(self):
        grid = np.linspace(0.0, math.pi / 2.0, 100)
        vals = [cst.tilde_omega(float(w)) for w in grid]
        assert all(b >= a for a, b in zip(vals, vals[1:]))
        assert all(0.5 <= v <= 1.0 for v in vals)
        assert vals[-1] == pytest.approx(1.0)
        assert max(vals[:-1]) < 1.0

    def test_delta_omega_values(self):
        assert cst.delta_omega_bound(math.pi / 2.0, 3) == pytest.approx(5.0 / 6.0, rel=1e-12)
        assert cst.delta_omega_bound(math.pi / 6.0, 3) == pytest.approx(0.97767, abs=1e-5)
        assert cst.delta_omega_bound(math.pi / 2.0, 4) == pytest.approx(8.0 / 9.0, rel=1e-12)

    def test_delta_omega_monotone_and_below_one(self):
        for d in (3, 4, 5):
            grid = np.linspace(0.05, math.pi / 2.0, 40)
            vals = [cst.delta_omega_bound(float(w), d) for w in grid]
            assert all(b <= a + 1e-15 for a, b in zip(vals, vals[1:]))
            assert all(0.0 < v < 1.0 for v in vals)

    def test_delta_omega_domain(self):
        with pytest.raises(ValueError):
            cst.delta_omega_bound(math.pi / 2.0, 2)


class TestDerivedConstants:
    def test_cone_vertex_constant_frozen(self):
        # 2 * (7/3) * sqrt(2) * 2 = (28/3) sqrt 2, frozen by the oracle
        assert cst.cone_vertex_constant(0.5, 1.0, "canonical") == pytest.approx(
            13.199326582148888, rel=1e-12
        )

    def test_newtonian_constant_frozen(self):
        # Gamma(1/2) / (4 pi)^(3/2)
        assert cst.newtonian_constant(3) == pytest.approx(0.03978873577297383, rel=1e-12)

    def test_green_holder_ratio(self):
        ratio = cst.green_holder_constant(0.5, 3) / cst.newtonian_constant(3)
        assert ratio == pytest.approx(3.6742346141747664, rel=1e-10)

    def test_cone2d_table(self):
        dom = geometry.BallMinusCone(math.pi / 2.0, 1.0, d=2)
        t = cst.derived_constants(dom, 0.5)
        assert t["tilde_omega"] == pytest.approx(1.0)
        # tilde_omega = 1 makes C3 = 2 C2
        assert t["C3"] == pytest.approx(2.0 * t["C2"], rel=1e-14)
        assert "delta_omega" not in t
        for v in t.entries.values():
            assert math.isfinite(v) and v > 0.0

    def test_cone3d_table(self):
        dom = geometry.BallMinusCone(math.pi / 2.0, 1.0, d=3)
        t = cst.derived_constants(dom, 0.5)
        assert t["delta_omega"] == pytest.approx(5.0 / 6.0)
        assert "C1" in t and "C2" in t and "gamma_d" in t
        assert "C5" not in t  # planar-cone constants are inapplicable

    def test_wedge_table(self):
        dom = geometry.CylinderMinusWedge(math.pi / 2.0, 1.0, 1.0)
        t = cst.derived_constants(dom, 0.5, gamma=6.0, q=1.5)
        for key in ("C3", "C8", "C9", "C10", "C11", "C12", "C_f"):
            assert key in t

    def test_alpha_one_rejected_where_divided(self):
        dom = geometry.BallMinusCone(math.pi / 4.0, 1.0, d=2)
        with pytest.raises(ValueError):
            cst.cone_vertex_constant(1.0, 1.0)
        # the table builder surfaces the same constraint
        with pytest.raises(ValueError):
            cst.derived_constants(dom, 1.0)

    def test_table_serialization(self):
        dom = geometry.Annulus(1.0, 2.0, d=2)
        t = cst.derived_constants(dom, 0.5, policy="best")
        d = t.as_json_dict()
        assert d["policy"] == "best"
        assert "C_alpha_d_R_r" in d

    def test_translation_invariance(self):
        a0 = cst.derived_constants(geometry.Annulus(1.0, 2.0, d=2), 0.5)
        a1 = cst.derived_constants(geometry.Annulus(1.0, 2.0, d=2, center=(5.0, -3.0)), 0.5)
        assert a0.entries == a1.entries
