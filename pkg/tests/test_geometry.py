"""Geometry tests: exact distances against a brute-force boundary-sampling
oracle, membership, classification partitions and symmetry invariance."""

import math
import zlib

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exitbounds import geometry
from helpers import sample_boundary, sample_interior

DOMAINS = [
    geometry.Ball(1.0, d=2),
    geometry.Ball(1.0, d=3),
    geometry.Annulus(1.0, 2.0, d=2),
    geometry.Annulus(1.0, 2.0, d=3),
    geometry.BallMinusCone(math.pi / 2.0, 1.0, d=2),
    geometry.BallMinusCone(math.pi / 4.0, 1.0, d=2),
    geometry.BallMinusCone(0.0, 1.0, d=2),
    geometry.BallMinusCone(math.pi / 3.0, 1.0, d=3),
    geometry.CylinderMinusWedge(math.pi / 2.0, 1.0, 1.0),
    geometry.CylinderMinusWedge(math.pi / 4.0, 1.0, 0.5),
]


class TestContains:
    def test_annulus(self):
        a = geometry.Annulus(1.0, 2.0, d=2)
        assert a.contains([1.5, 0.0])
        assert not a.contains([1.0, 0.0])  # boundary point
        assert not a.contains([0.5, 0.0])
        assert not a.contains([2.5, 0.0])

    def test_cone_axis_point_excluded(self):
        c = geometry.BallMinusCone(math.pi / 4.0, 1.0, d=2)
        assert not c.contains([0.5, 0.0])  # on the cone axis, inside the cone
        assert c.contains([-0.5, 0.0])
        assert not c.contains([0.0, 0.0])  # vertex

    def test_slit_degenerate_cone(self):
        c = geometry.BallMinusCone(0.0, 1.0, d=2)
        assert not c.contains([0.5, 0.0])  # on the slit
        assert c.contains([0.5, 0.01])
        assert c.contains([-0.5, 0.0])

    def test_dimension_mismatch(self):
        with pytest.raises(geometry.GeometryError):
            geometry.Ball(1.0, d=2).contains([0.1, 0.2, 0.3])

    @settings(max_examples=100, deadline=None)
    @given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0, 2 * math.pi))
    def test_rotation_invariance_about_cone_axis_3d(self, x1, x2, angle):
        # membership is invariant under rotations about the cone axis
        dom = geometry.BallMinusCone(math.pi / 3.0, 1.0, d=3)
        p = np.array([x1, x2, 0.3 * x2])
        c, s = math.cos(angle), math.sin(angle)
        q = np.array([p[0], c * p[1] - s * p[2], s * p[1] + c * p[2]])
        assert dom.contains(p) == dom.contains(q)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
    def test_wedge_midplane_reflection(self, x1, x2, x3):
        dom = geometry.CylinderMinusWedge(math.pi / 4.0, 1.0, 1.0)
        p = np.array([x1, x2, x3])
        q = np.array([x1, x2, -x3])
        assert dom.contains(p) == dom.contains(q)
        assert dom.signed_dist(p) == pytest.approx(dom.signed_dist(q), abs=0.0)


class TestDistance:
    def test_annulus_examples(self):
        a = geometry.Annulus(1.0, 2.0, d=2)
        assert geometry.dist_to_boundary(a, [1.5, 0.0]) == pytest.approx(0.5)
        assert geometry.dist_to_boundary(a, [1.0, 0.0]) == pytest.approx(0.0)

    def test_ball_center(self):
        b = geometry.Ball(1.0, d=3)
        assert geometry.dist_to_boundary(b, [0.0, 0.0, 0.0]) == pytest.approx(1.0)

    def test_half_disk_point(self):
        c = geometry.BallMinusCone(math.pi / 2.0, 1.0, d=2)
        assert geometry.dist_to_boundary(c, [-0.5, 0.0]) == pytest.approx(0.5)

    def test_outside_point_rejected(self):
        with pytest.raises(geometry.GeometryError):
            geometry.dist_to_boundary(geometry.Ball(1.0, d=2), [2.0, 0.0])

    @pytest.mark.parametrize("dom", DOMAINS, ids=lambda d: f"{type(d).__name__}-{d.d}d")
    def test_brute_force_oracle(self, dom):
        rng = np.random.default_rng(zlib.crc32(repr(dom).encode()))
        boundary = sample_boundary(dom, 1_000_000, rng)
        # keep test points a little off the boundary: the oracle's error is
        # quadratic in the sample spacing there, linear at the boundary
        pts = sample_interior(dom, 100, rng, min_dist=0.03 * dom.diameter())
        exact = dom.signed_dist(pts)
        for x, de in zip(pts, exact):
            brute = float(np.min(np.linalg.norm(boundary - x, axis=1)))
            assert abs(de - brute) <= 1e-3, f"{type(dom).__name__}: exact {de} vs brute {brute}"


class TestNearestBoundary:
    @pytest.mark.parametrize("dom", DOMAINS, ids=lambda d: f"{type(d).__name__}-{d.d}d")
    def test_projection_lands_on_boundary(self, dom):
        rng = np.random.default_rng(7)
        pts = sample_interior(dom, 200, rng)
        proj, comp = dom.nearest_boundary(pts)
        s = dom.signed_dist(proj)
        assert np.all(np.abs(s) <= 1e-9 * dom.diameter())
        # projection distance equals the analytic distance
        d_proj = np.linalg.norm(pts - proj, axis=1)
        assert np.allclose(d_proj, dom.signed_dist(pts), atol=1e-12)


class TestDiameter:
    def test_values(self):
        assert geometry.Annulus(1.0, 2.0, d=2).diameter() == pytest.approx(4.0)
        assert geometry.Ball(1.0, d=2).diameter() == pytest.approx(2.0)
        assert geometry.CylinderMinusWedge(math.pi / 4.0, 1.0, 1.0).diameter() == pytest.approx(
            math.sqrt(5.0), rel=1e-12
        )
        assert geometry.BallMinusCone(math.pi / 4.0, 1.0, d=2).diameter() == pytest.approx(2.0)

    @pytest.mark.parametrize(
        "dom",
        [d for d in DOMAINS if not isinstance(d, geometry.Ball)],
        ids=lambda d: f"{type(d).__name__}-{d.d}d",
    )
    def test_diameter_dominates_sampled_pairs(self, dom):
        rng = np.random.default_rng(11)
        pts = sample_interior(dom, 400, rng)
        dmax = 0.0
        for i in range(0, 400, 40):
            dmax = max(dmax, float(np.max(np.linalg.norm(pts - pts[i], axis=1))))
        assert dmax <= dom.diameter() + 1e-12
        assert dmax >= 0.8 * dom.diameter()  # sampled pairs come close to it


class TestClassification:
    def test_cone_decomposition(self):
        dom = geometry.BallMinusCone(math.pi / 4.0, 1.0, d=2)
        on_sphere = np.array([-1.0, 0.0])
        lateral = 0.5 * np.array([math.cos(math.pi / 4.0), math.sin(math.pi / 4.0)])
        assert geometry.classify_boundary(dom, on_sphere, "obstacle").label == geometry.GAMMA1
        assert geometry.classify_boundary(dom, lateral, "obstacle").label == geometry.GAMMA0
        # the vertex belongs to the absorbing part
        assert geometry.classify_boundary(dom, [0.0, 0.0], "obstacle").label == geometry.GAMMA0

    def test_wedge_endcap_is_gamma1(self):
        dom = geometry.CylinderMinusWedge(math.pi / 4.0, 1.0, 1.0)
        cap_point = np.array([-0.4, 0.1, 0.5])
        assert geometry.classify_boundary(dom, cap_point, "obstacle").label == geometry.GAMMA1
        lateral = np.array(
            [0.4 * math.cos(math.pi / 4.0), 0.4 * math.sin(math.pi / 4.0), 0.1]
        )
        assert geometry.classify_boundary(dom, lateral, "obstacle").label == geometry.GAMMA0

    def test_annulus_inner(self):
        dom = geometry.Annulus(1.0, 2.0, d=2)
        assert geometry.classify_boundary(dom, [0.0, 1.0], "inner_sphere").label == geometry.GAMMA0
        assert geometry.classify_boundary(dom, [2.0, 0.0], "inner_sphere").label == geometry.GAMMA1

    def test_far_point_rejected(self):
        dom = geometry.Annulus(1.0, 2.0, d=2)
        with pytest.raises(geometry.GeometryError):
            geometry.classify_boundary(dom, [1.5, 0.0], "inner_sphere")

    @pytest.mark.parametrize(
        "dom",
        [
            geometry.BallMinusCone(math.pi / 2.0, 1.0, d=2),
            geometry.BallMinusCone(math.pi / 3.0, 1.0, d=3),
            geometry.CylinderMinusWedge(math.pi / 4.0, 1.0, 1.0),
        ],
        ids=lambda d: f"{type(d).__name__}-{d.d}d",
    )
    def test_partition_every_boundary_point_labeled_once(self, dom):
        rng = np.random.default_rng(3)
        pts = sample_boundary(dom, 5000, rng)
        labels = geometry.classify_boundary_batch(dom, pts, "obstacle")
        # boolean labels: every point gets exactly one of the two classes
        assert labels.shape == (5000,)
        assert labels.dtype == bool
        assert 0 < labels.sum() < 5000


class TestDistMembershipConsistency:
    @pytest.mark.parametrize("dom", DOMAINS, ids=lambda d: f"{type(d).__name__}-{d.d}d")
    def test_positive_signed_dist_iff_inside(self, dom):
        rng = np.random.default_rng(zlib.crc32(repr(dom).encode()) ^ 0xBEEF)
        center = np.asarray(getattr(dom, "center", ()) or np.zeros(dom.d))
        pts = center + (rng.random((2000, dom.d)) - 0.5) * dom.diameter() * 1.2
        inside = dom.contains(pts)
        sd = dom.signed_dist(pts)
        assert np.array_equal(inside, sd > 0.0)


class TestSerialization:
    @pytest.mark.parametrize("dom", DOMAINS, ids=lambda d: f"{type(d).__name__}-{d.d}d")
    def test_round_trip(self, dom):
        assert geometry.domain_from_dict(dom.to_dict()) == dom
