"""Contraction-factor estimation by exact Poisson-kernel sampling.

For a cone of half-angle omega removed from a ball, the one-scale
contraction factor is the largest probability, over start points y on the
mid-sphere outside the cone, that Brownian motion killed on the enclosing
sphere exits through the part not covered by the cone's cap.  By scale
invariance it suffices to work on the unit sphere with ||y|| = 1/2.

Exit points are drawn directly from the Poisson kernel of the ball by
rejection from the uniform measure (the kernel is bounded by
(1 - |y|^2) / (1 - |y|)^d), so the estimate carries no discretization bias.
The supremum over start points is taken over a finite polar-angle grid that
always contains the antipodal point; the reported maximum is therefore a
lower estimate of the true supremum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator

from .._kernels._streams import make_path_bitgen
from .engine import SUB_DELTA, McEstimate

__all__ = ["DeltaHatResult", "estimate_delta_hat", "poisson_exit_points", "cap_hit_probability"]


@dataclass(frozen=True)
class DeltaHatResult:
    """Grid maximum of the sphere-exit probability plus the per-angle table."""

    estimate: McEstimate
    angles: tuple[float, ...]
    per_angle: tuple[McEstimate, ...]


def poisson_exit_points(y: np.ndarray, d: int, n: int, rng: Generator) -> np.ndarray:
    """Sample n exit points on the unit sphere of Brownian motion from y.

    Rejection sampling against the uniform measure with the exact kernel
    ratio ((1 - |y|) / |y - xi|)^d as acceptance probability (times the
    bounding constant); exact for any interior y.
    """
    y = np.asarray(y, dtype=np.float64)
    ny = float(np.linalg.norm(y))
    if not ny < 1.0:
        raise ValueError("the start point must lie strictly inside the unit sphere")
    out = np.empty((n, d))
    have = 0
    # acceptance ratio ((1-|y|)/|y-xi|)^d has mean (1-|y|)^d * E[...],
    # so propose in blocks sized for the worst case
    block = max(2048, int(n * 2.0 ** d / max(1.0 - ny, 1e-3)) // 8)
    block = min(block, 1 << 22)
    while have < n:
        z = rng.standard_normal((block, d))
        nrm = np.sqrt(np.sum(z * z, axis=1))
        nrm[nrm == 0.0] = 1.0
        xi = z / nrm[:, None]
        dist = np.sqrt(np.sum((xi - y) ** 2, axis=1))
        ratio = ((1.0 - ny) / dist) ** d
        u = rng.random(block)
        acc = xi[u < ratio]
        take = min(n - have, len(acc))
        out[have : have + take] = acc[:take]
        have += take
    return out


def cap_hit_probability(omega: float, d: int, y: np.ndarray, n: int, rng: Generator) -> np.ndarray:
    """Indicator samples of the exit point landing inside the polar cap
    {xi_1 >= cos(omega)} for Brownian motion from y killed on the unit sphere."""
    pts = poisson_exit_points(y, d, n, rng)
    return (pts[:, 0] >= math.cos(omega)).astype(np.float64)


def estimate_delta_hat(
    omega: float,
    d: int,
    n: int,
    seed: int = 0,
    angles: tuple[float, ...] | None = None,
) -> DeltaHatResult:
    """Monte Carlo estimate of the contraction factor for a cone of angle omega.

    Runs one Poisson-sampled estimate per start angle phi (the start point is
    (cos phi, sin phi, 0, ...) / 2, which must lie outside the cone, so
    phi > omega; the antipode phi = pi is always included) and returns the
    grid maximum.  omega = 0 removes nothing: the probability is exactly 1.
    """
    if d < 2:
        raise ValueError(f"needs d >= 2, got {d}")
    if not (0.0 <= omega <= math.pi / 2.0):
        raise ValueError(f"cone angle must lie in [0, pi/2], got {omega}")
    if omega == 0.0:
        est = McEstimate(1.0, 0.0, n, (1.0, 1.0), seed, "delta_hat_empty_cap")
        return DeltaHatResult(estimate=est, angles=(math.pi,), per_angle=(est,))
    if angles is None:
        lo = omega + 0.1 * (math.pi - omega)
        angles = tuple(np.linspace(lo, math.pi, 7))
    per: list[McEstimate] = []
    for j, phi in enumerate(angles):
        if phi <= omega:
            raise ValueError(f"start angle {phi} lies inside the cone (omega={omega})")
        y = np.zeros(d)
        y[0] = 0.5 * math.cos(phi)
        if d >= 2:
            y[1] = 0.5 * math.sin(phi)
        rng = Generator(make_path_bitgen(seed, (j << 4) | SUB_DELTA, 0))
        hits = cap_hit_probability(omega, d, y, n, rng)
        vals = 1.0 - hits
        per.append(McEstimate.from_values(vals, seed, f"delta_hat[phi={phi:.6g}]"))
    best = max(per, key=lambda e: e.mean)
    return DeltaHatResult(estimate=best, angles=tuple(angles), per_angle=tuple(per))
