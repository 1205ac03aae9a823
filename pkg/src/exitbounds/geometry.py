"""Parametric benchmark domains with exact membership, boundary distance,
nearest-boundary projection and boundary decomposition.

Four shapes are supported: balls, annuli, balls with a solid cone removed
(cone axis +x1, vertex at the origin) and, in dimension 3, cylinders with a
wedge removed (wedge edge along x3).  All queries accept either a single
point of shape (d,) or a batch of shape (n, d).

The signed-distance formulas below are mirrored operation-for-operation by
the simulation kernels; change them only together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Ball",
    "Annulus",
    "BallMinusCone",
    "CylinderMinusWedge",
    "DomainSpec",
    "BoundaryClass",
    "GeometryError",
    "domain_from_dict",
    "contains",
    "dist_to_boundary",
    "classify_boundary",
    "diameter",
]

# component codes shared with classify_boundary
COMP_SPHERE = 0        # outer sphere / circle of a ball or cone-ball
COMP_INNER_SPHERE = 1
COMP_OUTER_SPHERE = 2
COMP_OBSTACLE = 3      # cone lateral face / wedge lateral face (vertex included)
COMP_SHELL = 4         # cylindrical shell of the wedge domain
COMP_ENDCAP = 5        # flat ends of the cylinder

GAMMA0 = "Gamma0"
GAMMA1 = "Gamma1"

KIND_BALL = 0
KIND_ANNULUS = 1
KIND_BALL_MINUS_CONE = 2
KIND_CYLINDER_MINUS_WEDGE = 3


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class BoundaryClass:
    label: str  # GAMMA0 | GAMMA1
    description: str


def _as_batch(x) -> tuple[np.ndarray, bool]:
    a = np.asarray(x, dtype=np.float64)
    if a.ndim == 1:
        return a[None, :], True
    if a.ndim == 2:
        return a, False
    raise GeometryError(f"points must have shape (d,) or (n, d), got {a.shape}")


def _check_dim(pts: np.ndarray, d: int) -> None:
    if pts.shape[1] != d:
        raise GeometryError(f"dimension mismatch: domain is {d}-dimensional, points are {pts.shape[1]}-dimensional")


def _norm_accum(pts: np.ndarray, start: int = 0) -> np.ndarray:
    """Left-associated sum of squares then sqrt; mirrors the kernel loops."""
    s = pts[:, start] * pts[:, start]
    for k in range(start + 1, pts.shape[1]):
        s = s + pts[:, k] * pts[:, k]
    return np.sqrt(s)


def _cone_plane_signed(t, u, r, cw, sw):
    """Signed distance to the closed planar sector {rho <= r, angle <= omega}.

    t is the axis coordinate, u >= 0 the perpendicular radius; positive
    outside the sector, negative inside.
    """
    rho = np.sqrt(t * t + u * u)
    side = t * sw - u * cw           # >= 0 inside the angular sector
    proj = t * cw + u * sw           # position of the foot along the edge ray
    sseg = np.clip(proj, 0.0, r)
    dt = t - sseg * cw
    du = u - sseg * sw
    d_edge = np.sqrt(dt * dt + du * du)
    # proj >= 0 settles the degenerate slit (omega = 0): the negative axis
    # has side == 0 but lies outside the sector
    in_sector = (side >= 0.0) & (proj >= 0.0)
    inside = in_sector & (rho <= r)
    outside_radial = in_sector & (rho > r)
    q = np.where(inside, -np.minimum(side, r - rho), np.where(outside_radial, rho - r, d_edge))
    return q, rho, sseg


@dataclass(frozen=True)
class Ball:
    radius: float
    d: int = 2
    center: tuple[float, ...] = ()

    def __post_init__(self):
        if self.radius <= 0.0:
            raise GeometryError(f"ball radius must be > 0, got {self.radius}")
        if self.d < 1:
            raise GeometryError(f"dimension must be >= 1, got {self.d}")
        c = self.center if self.center else (0.0,) * self.d
        if len(c) != self.d:
            raise GeometryError("center dimension mismatch")
        object.__setattr__(self, "center", tuple(float(v) for v in c))

    def diameter(self) -> float:
        return 2.0 * self.radius

    def signed_dist(self, x):
        pts, single = _as_batch(x)
        _check_dim(pts, self.d)
        rel = pts - np.asarray(self.center)
        s = self.radius - _norm_accum(rel)
        return float(s[0]) if single else s

    def contains(self, x):
        s = self.signed_dist(x)
        return s > 0.0 if np.isscalar(s) else s > 0.0

    def nearest_boundary(self, x):
        pts, single = _as_batch(x)
        _check_dim(pts, self.d)
        c = np.asarray(self.center)
        rel = pts - c
        rho = _norm_accum(rel)
        unit = np.where(rho[:, None] > 0.0, rel / np.where(rho[:, None] == 0.0, 1.0, rho[:, None]), _axis_unit(self.d))
        proj = c + self.radius * unit
        comp = np.full(len(pts), COMP_SPHERE, dtype=np.int64)
        return (proj[0], int(comp[0])) if single else (proj, comp)

    def kernel_encoding(self):
        return KIND_BALL, np.array([self.radius], dtype=np.float64)

    def to_dict(self):
        return {"kind": "ball", "radius": self.radius, "d": self.d, "center": list(self.center)}


@dataclass(frozen=True)
class Annulus:
    r: float
    R: float
    d: int = 2
    center: tuple[float, ...] = ()

    def __post_init__(self):
        if not (0.0 < self.r < self.R):
            raise GeometryError(f"annulus needs 0 < r < R, got r={self.r} R={self.R}")
        if self.d < 2:
            raise GeometryError(f"dimension must be >= 2, got {self.d}")
        c = self.center if self.center else (0.0,) * self.d
        if len(c) != self.d:
            raise GeometryError("center dimension mismatch")
        object.__setattr__(self, "center", tuple(float(v) for v in c))

    def diameter(self) -> float:
        return 2.0 * self.R

    def signed_dist(self, x):
        pts, single = _as_batch(x)
        _check_dim(pts, self.d)
        rel = pts - np.asarray(self.center)
        rho = _norm_accum(rel)
        s = np.minimum(rho - self.r, self.R - rho)
        return float(s[0]) if single else s

    def contains(self, x):
        s = self.signed_dist(x)
        return s > 0.0

    def nearest_boundary(self, x):
        pts, single = _as_batch(x)
        _check_dim(pts, self.d)
        c = np.asarray(self.center)
        rel = pts - c
        rho = _norm_accum(rel)
        safe = np.where(rho[:, None] == 0.0, 1.0, rho[:, None])
        unit = np.where(rho[:, None] > 0.0, rel / safe, _axis_unit(self.d))
        inner_closer = (rho - self.r) <= (self.R - rho)
        radius = np.where(inner_closer, self.r, self.R)
        proj = c + radius[:, None] * unit
        comp = np.where(inner_closer, COMP_INNER_SPHERE, COMP_OUTER_SPHERE).astype(np.int64)
        return (proj[0], int(comp[0])) if single else (proj, comp)

    def kernel_encoding(self):
        return KIND_ANNULUS, np.array([self.r, self.R], dtype=np.float64)

    def to_dict(self):
        return {"kind": "annulus", "r": self.r, "R": self.R, "d": self.d, "center": list(self.center)}


def _axis_unit(d: int) -> np.ndarray:
    u = np.zeros(d)
    u[0] = 1.0
    return u


@dataclass(frozen=True)
class BallMinusCone:
    """Ball of radius r minus the solid cone of half-angle omega around +x1.

    omega = 0 is admitted: the obstacle degenerates to the radial slit
    [0, r] x {0} which the distance computation still honors exactly.
    """

    omega: float
    r: float
    d: int = 2
    cos_omega: float = field(init=False, repr=False)
    sin_omega: float = field(init=False, repr=False)

    def __post_init__(self):
        if not (0.0 <= self.omega <= math.pi / 2.0):
            raise GeometryError(f"cone angle must lie in [0, pi/2], got {self.omega}")
        if self.r <= 0.0:
            raise GeometryError(f"cone radius must be > 0, got {self.r}")
        if self.d < 2:
            raise GeometryError(f"dimension must be >= 2, got {self.d}")
        object.__setattr__(self, "cos_omega", math.cos(self.omega))
        object.__setattr__(self, "sin_omega", math.sin(self.omega))

    def diameter(self) -> float:
        return 2.0 * self.r

    def _tu(self, pts):
        t = pts[:, 0]
        if self.d == 2:
            u = np.abs(pts[:, 1])
        else:
            u = _norm_accum(pts, start=1)
        return t, u

    def signed_dist(self, x):
        pts, single = _as_batch(x)
        _check_dim(pts, self.d)
        t, u = self._tu(pts)
        q, rho, _ = _cone_plane_signed(t, u, self.r, self.cos_omega, self.sin_omega)
        s = np.minimum(self.r - rho, q)
        return float(s[0]) if single else s

    def contains(self, x):
        pts, single = _as_batch(x)
        _check_dim(pts, self.d)
        t, u = self._tu(pts)
        q, rho, _ = _cone_plane_signed(t, u, self.r, self.cos_omega, self.sin_omega)
        res = (rho < self.r) & (q > 0.0)
        return bool(res[0]) if single else res

    def nearest_boundary(self, x):
        pts, single = _as_batch(x)
        _check_dim(pts, self.d)
        t, u = self._tu(pts)
        rho = np.sqrt(t * t + u * u)
        safe_rho = np.where(rho == 0.0, 1.0, rho)
        sphere_pt = pts * (self.r / safe_rho)[:, None]
        sphere_pt[rho == 0.0] = self.r * _axis_unit(self.d)
        d_sphere = np.abs(self.r - rho)

        proj = t * self.cos_omega + u * self.sin_omega
        sseg = np.clip(proj, 0.0, self.r)
        et = sseg * self.cos_omega
        eu = sseg * self.sin_omega
        dt = t - et
        du = u - eu
        d_edge = np.sqrt(dt * dt + du * du)
        edge_pt = np.zeros_like(pts)
        edge_pt[:, 0] = et
        if self.d == 2:
            edge_pt[:, 1] = np.where(pts[:, 1] >= 0.0, eu, -eu)
        else:
            safe_u = np.where(u == 0.0, 1.0, u)
            frac = (eu / safe_u)[:, None]
            perp = pts[:, 1:] * frac
            # on-axis points take an arbitrary fixed perpendicular direction
            on_axis = u == 0.0
            if np.any(on_axis):
                perp[on_axis] = 0.0
                perp[on_axis, 0] = eu[on_axis]
            edge_pt[:, 1:] = perp

        use_edge = d_edge < d_sphere
        out = np.where(use_edge[:, None], edge_pt, sphere_pt)
        # edge feet at the rim of the ball belong to the sphere part
        corner = sseg >= self.r * (1.0 - 1e-12)
        comp = np.where(use_edge & ~corner, COMP_OBSTACLE, COMP_SPHERE).astype(np.int64)
        return (out[0], int(comp[0])) if single else (out, comp)

    def kernel_encoding(self):
        return KIND_BALL_MINUS_CONE, np.array(
            [self.r, self.cos_omega, self.sin_omega], dtype=np.float64
        )

    def to_dict(self):
        return {"kind": "ball_minus_cone", "omega": self.omega, "r": self.r, "d": self.d}


@dataclass(frozen=True)
class CylinderMinusWedge:
    """Cylinder B2(0, r) x (-l/2, l/2) minus the wedge C(omega, r) x (-l/2, l/2).

    The planar cone lives in the (x1, x2) plane with axis +x1; x3 runs along
    the wedge edge.  Always three-dimensional.
    """

    omega: float
    r: float
    l: float
    cos_omega: float = field(init=False, repr=False)
    sin_omega: float = field(init=False, repr=False)

    def __post_init__(self):
        if not (0.0 <= self.omega <= math.pi / 2.0):
            raise GeometryError(f"wedge angle must lie in [0, pi/2], got {self.omega}")
        if self.r <= 0.0 or self.l <= 0.0:
            raise GeometryError(f"wedge needs r > 0 and l > 0, got r={self.r} l={self.l}")
        object.__setattr__(self, "cos_omega", math.cos(self.omega))
        object.__setattr__(self, "sin_omega", math.sin(self.omega))

    @property
    def d(self) -> int:
        return 3

    def diameter(self) -> float:
        return math.sqrt((2.0 * self.r) ** 2 + self.l ** 2)

    def signed_dist(self, x):
        pts, single = _as_batch(x)
        _check_dim(pts, 3)
        t = pts[:, 0]
        u = np.abs(pts[:, 1])
        q, rho, _ = _cone_plane_signed(t, u, self.r, self.cos_omega, self.sin_omega)
        s2 = np.minimum(self.r - rho, q)
        s3 = self.l / 2.0 - np.abs(pts[:, 2])
        s = np.minimum(s2, s3)
        return float(s[0]) if single else s

    def contains(self, x):
        pts, single = _as_batch(x)
        _check_dim(pts, 3)
        t = pts[:, 0]
        u = np.abs(pts[:, 1])
        q, rho, _ = _cone_plane_signed(t, u, self.r, self.cos_omega, self.sin_omega)
        res = (rho < self.r) & (q > 0.0) & (np.abs(pts[:, 2]) < self.l / 2.0)
        return bool(res[0]) if single else res

    def nearest_boundary(self, x):
        pts, single = _as_batch(x)
        _check_dim(pts, 3)
        plane = BallMinusCone(self.omega, self.r, d=2)
        plane_pt, plane_comp = plane.nearest_boundary(pts[:, :2])
        if plane_pt.ndim == 1:
            plane_pt = plane_pt[None, :]
            plane_comp = np.array([plane_comp])
        d_plane = _norm_accum(pts[:, :2] - plane_pt)
        d_cap = self.l / 2.0 - np.abs(pts[:, 2])

        use_cap = np.abs(d_cap) < d_plane
        out = np.empty_like(pts)
        out[:, :2] = np.where(use_cap[:, None], pts[:, :2], plane_pt)
        cap_z = np.where(pts[:, 2] >= 0.0, self.l / 2.0, -self.l / 2.0)
        out[:, 2] = np.where(use_cap, cap_z, pts[:, 2])
        comp = np.where(
            use_cap,
            COMP_ENDCAP,
            np.where(plane_comp == COMP_OBSTACLE, COMP_OBSTACLE, COMP_SHELL),
        ).astype(np.int64)
        return (out[0], int(comp[0])) if single else (out, comp)

    def kernel_encoding(self):
        return KIND_CYLINDER_MINUS_WEDGE, np.array(
            [self.r, self.cos_omega, self.sin_omega, self.l / 2.0], dtype=np.float64
        )

    def to_dict(self):
        return {"kind": "cylinder_minus_wedge", "omega": self.omega, "r": self.r, "l": self.l}


DomainSpec = Ball | Annulus | BallMinusCone | CylinderMinusWedge


def domain_from_dict(spec: dict) -> DomainSpec:
    kind = spec.get("kind")
    if kind == "ball":
        return Ball(radius=spec["radius"], d=int(spec.get("d", 2)), center=tuple(spec.get("center", ())))
    if kind == "annulus":
        return Annulus(r=spec["r"], R=spec["R"], d=int(spec.get("d", 2)), center=tuple(spec.get("center", ())))
    if kind == "ball_minus_cone":
        return BallMinusCone(omega=spec["omega"], r=spec["r"], d=int(spec.get("d", 2)))
    if kind == "cylinder_minus_wedge":
        return CylinderMinusWedge(omega=spec["omega"], r=spec["r"], l=spec["l"])
    raise GeometryError(f"unknown domain kind {kind!r}")


def contains(domain: DomainSpec, x) -> bool:
    return domain.contains(x)


def diameter(domain: DomainSpec) -> float:
    return domain.diameter()


def dist_to_boundary(domain: DomainSpec, x) -> float:
    """Exact distance to the boundary for points in the closed domain."""
    s = domain.signed_dist(x)
    tol = 1e-9 * domain.diameter()
    if np.any(np.asarray(s) < -tol):
        raise GeometryError("point lies outside the domain closure")
    return np.maximum(s, 0.0) if isinstance(s, np.ndarray) else max(s, 0.0)


# decompositions of the boundary into an absorbing part Gamma0 and the rest
DECOMP_OBSTACLE = "obstacle"        # cone / wedge lateral surface is Gamma0
DECOMP_INNER_SPHERE = "inner_sphere"  # annulus inner sphere is Gamma0
DECOMP_ORIGIN_BALL = "origin_ball"  # Gamma0 = boundary within radius r0 of 0
DECOMP_ALL = "all"                  # whole boundary is Gamma0


def classify_boundary(
    domain: DomainSpec,
    y,
    decomposition: str,
    r0: float | None = None,
) -> BoundaryClass:
    """Deterministic Gamma0/Gamma1 label for a point on (or near) the boundary.

    The point must be within 1e-9 * diam of the boundary.  Under the obstacle
    decompositions the cone/wedge lateral surface and vertex map to Gamma0.
    """
    labels = classify_boundary_batch(domain, np.asarray(y, dtype=np.float64)[None, :], decomposition, r0)
    label = GAMMA0 if labels[0] else GAMMA1
    return BoundaryClass(label=label, description=decomposition)


def classify_boundary_batch(domain, pts, decomposition: str, r0: float | None = None):
    """Vectorized classification; returns a boolean array (True = Gamma0)."""
    pts = np.asarray(pts, dtype=np.float64)
    tol = 1e-9 * domain.diameter()
    s = domain.signed_dist(pts)
    if np.any(np.abs(s) > tol):
        worst = float(np.max(np.abs(s)))
        raise GeometryError(
            f"point is {worst:.3g} from the boundary, beyond the classification tolerance {tol:.3g}"
        )
    if decomposition == DECOMP_ALL:
        return np.ones(len(pts), dtype=bool)
    if decomposition == DECOMP_INNER_SPHERE:
        if not isinstance(domain, Annulus):
            raise GeometryError("inner-sphere decomposition needs an annulus")
        _, comp = domain.nearest_boundary(pts)
        return comp == COMP_INNER_SPHERE
    if decomposition == DECOMP_OBSTACLE:
        if not isinstance(domain, (BallMinusCone, CylinderMinusWedge)):
            raise GeometryError("obstacle decomposition needs a cone or wedge domain")
        _, comp = domain.nearest_boundary(pts)
        return comp == COMP_OBSTACLE
    if decomposition == DECOMP_ORIGIN_BALL:
        if r0 is None:
            raise GeometryError("origin-ball decomposition needs r0")
        rho = _norm_accum(pts)
        return rho < r0
    raise GeometryError(f"unknown boundary decomposition {decomposition!r}")


def snap_to_boundary(domain: DomainSpec, pts):
    """Project near-boundary points onto the boundary; returns (points, components)."""
    return domain.nearest_boundary(pts)
