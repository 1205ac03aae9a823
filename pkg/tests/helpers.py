"""Shared test helpers: boundary samplers for brute-force geometry oracles."""

from __future__ import annotations

import numpy as np

from exitbounds import geometry


def _unit_sphere(rng, n, d):
    z = rng.standard_normal((n, d))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    return z


def sample_boundary(domain, n: int, rng: np.random.Generator) -> np.ndarray:
    """Dense (roughly area-proportional) sample of boundary points."""
    if isinstance(domain, geometry.Ball):
        return np.asarray(domain.center) + domain.radius * _unit_sphere(rng, n, domain.d)
    if isinstance(domain, geometry.Annulus):
        # area-proportional split keeps the oracle error uniform
        w_in = domain.r ** (domain.d - 1)
        w_out = domain.R ** (domain.d - 1)
        n_in = int(n * w_in / (w_in + w_out))
        pts = np.concatenate(
            [
                domain.r * _unit_sphere(rng, n_in, domain.d),
                domain.R * _unit_sphere(rng, n - n_in, domain.d),
            ]
        )
        return np.asarray(domain.center) + pts
    if isinstance(domain, geometry.BallMinusCone):
        return _sample_cone_ball_boundary(domain, n, rng)
    if isinstance(domain, geometry.CylinderMinusWedge):
        return _sample_wedge_boundary(domain, n, rng)
    raise TypeError(type(domain))


def _sample_cone_ball_boundary(dom: geometry.BallMinusCone, n, rng):
    d, r, w = dom.d, dom.r, dom.omega
    n_sph = n // 2
    n_lat = n - n_sph
    # sphere part: directions outside the cone cap
    out = []
    need = n_sph
    while need > 0:
        cand = _unit_sphere(rng, 2 * need + 16, d)
        keep = cand[:, 0] < np.cos(w) * 1.0 - 1e-12 if w > 0 else cand[:, 0] < 1.0
        cand = cand[keep][:need]
        out.append(r * cand)
        need -= len(cand)
    sph = np.concatenate(out) if out else np.empty((0, d))
    # lateral faces: radius s in (0, r), perpendicular direction uniform
    s = r * rng.random(n_lat)
    lat = np.zeros((n_lat, d))
    lat[:, 0] = s * np.cos(w)
    if d == 2:
        sign = np.where(rng.random(n_lat) < 0.5, 1.0, -1.0)
        lat[:, 1] = sign * s * np.sin(w)
    else:
        v = _unit_sphere(rng, n_lat, d - 1)
        lat[:, 1:] = (s * np.sin(w))[:, None] * v
    return np.concatenate([sph, lat])


def _sample_wedge_boundary(dom: geometry.CylinderMinusWedge, n, rng):
    r, l, w = dom.r, dom.l, dom.omega
    plane = geometry.BallMinusCone(w, r, d=2)
    n_side = n // 2
    n_cap = n - n_side
    # lateral surface: planar boundary x axial uniform
    side2d = _sample_cone_ball_boundary(plane, n_side, rng)
    z = l * (rng.random(n_side) - 0.5)
    side = np.column_stack([side2d, z])
    # end caps: planar interior points (rejection) at z = +-l/2
    pts = []
    need = n_cap
    while need > 0:
        cand = (2 * rng.random((2 * need + 16, 2)) - 1.0) * r
        cand = cand[plane.contains(cand)][:need]
        pts.append(cand)
        need -= len(cand)
    cap2d = np.concatenate(pts)
    zc = np.where(rng.random(n_cap) < 0.5, l / 2.0, -l / 2.0)
    caps = np.column_stack([cap2d, zc])
    return np.concatenate([side, caps])


def sample_interior(domain, n: int, rng: np.random.Generator, min_dist: float = 0.0) -> np.ndarray:
    """Uniform interior points by rejection from the bounding box."""
    d = domain.d
    diam = domain.diameter()
    center = np.asarray(getattr(domain, "center", ()) or np.zeros(d))
    out = []
    need = n
    while need > 0:
        cand = center + (rng.random((4 * need + 64, d)) - 0.5) * diam * 1.01
        ok = domain.contains(cand)
        if min_dist > 0.0:
            sd = domain.signed_dist(cand)
            ok &= sd > min_dist
        cand = cand[ok][:need]
        out.append(cand)
        need -= len(cand)
    return np.concatenate(out)
