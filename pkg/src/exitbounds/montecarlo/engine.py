"""Brownian exit-time estimators.

Two samplers drive everything: an adaptive Euler-Maruyama walk with shell
absorption for exit times and path integrals, and walk-on-spheres for
harmonic-measure quantities (discretization-free up to the termination
shell).  Paths are independent work items on counter-based streams keyed by
(seed, path index), so estimates do not depend on how paths are chunked or
scheduled: a fixed (seed, n) always reproduces the estimate bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .. import geometry
from .. import _kernels

__all__ = [
    "PathParams",
    "ExitSample",
    "McEstimate",
    "sample_exit",
    "run_exit_batch",
    "run_wos_batch",
    "estimate_v_alpha",
    "estimate_h",
    "estimate_ug_wos",
    "estimate_uf",
]

CENSOR_WARN_FRACTION = 1e-3

# substream codes keep estimator families on disjoint streams for one seed
SUB_EXIT = 1
SUB_WOS = 2
SUB_DELTA = 3


@dataclass(frozen=True)
class PathParams:
    """Discretization parameters of the Euler-Maruyama sampler.

    dt = min(dt_base, kappa * dist^2) under the boundary_adaptive policy;
    paths are absorbed when dist(x, bdry) <= shell_eps and censored after
    max_steps.  Unset lengths default relative to the domain diameter:
    dt_base = 1e-3 diam^2, shell_eps = 1e-4 diam, wos_eps = 1e-6 diam.
    """

    dt_base: float | None = None
    shell_eps: float | None = None
    dt_policy: str = "boundary_adaptive"
    kappa: float = 0.1
    max_steps: int = 1_000_000
    wos_eps: float | None = None

    def __post_init__(self):
        if self.dt_policy not in ("boundary_adaptive", "fixed"):
            raise ValueError(f"unknown dt policy {self.dt_policy!r}")
        if not (0.0 < self.kappa <= 1.0):
            raise ValueError(f"kappa must lie in (0, 1], got {self.kappa}")
        if self.max_steps <= 0:
            raise ValueError("max_steps must be positive")
        for name in ("dt_base", "shell_eps", "wos_eps"):
            v = getattr(self, name)
            if v is not None and not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be positive, got {v!r}")

    def resolved(self, domain) -> "PathParams":
        diam = domain.diameter()
        return replace(
            self,
            dt_base=self.dt_base if self.dt_base is not None else 1e-3 * diam * diam,
            shell_eps=self.shell_eps if self.shell_eps is not None else 1e-4 * diam,
            wos_eps=self.wos_eps if self.wos_eps is not None else 1e-6 * diam,
        )


@dataclass(frozen=True)
class ExitSample:
    """One simulated exit: time, boundary point, source integral, class."""

    tau: float
    exit_point: np.ndarray
    path_integral: float
    exit_class: geometry.BoundaryClass | None
    censored: bool
    steps: int


@dataclass(frozen=True)
class McEstimate:
    """Aggregated Monte Carlo estimate with its standard error and 95% CI."""

    mean: float
    std_error: float
    n: int
    ci95: tuple[float, float]
    seed: int
    estimator: str
    n_censored: int = 0
    warnings: tuple[str, ...] = field(default_factory=tuple)

    @classmethod
    def from_values(
        cls, values: np.ndarray, seed: int, estimator: str, n_censored: int = 0
    ) -> "McEstimate":
        n = len(values)
        warnings: tuple[str, ...] = ()
        total = n + n_censored
        if total > 0 and n_censored / total > CENSOR_WARN_FRACTION:
            warnings = (f"censoring fraction {n_censored / total:.2%} exceeds {CENSOR_WARN_FRACTION:.1%}",)
        if n == 0:
            return cls(math.nan, math.nan, 0, (math.nan, math.nan), seed, estimator, n_censored, warnings)
        mean = float(np.sum(values) / n)
        if n > 1:
            se = float(np.sqrt(np.sum((values - mean) ** 2) / (n - 1) / n))
        else:
            se = math.inf
        return cls(mean, se, n, (mean - 1.96 * se, mean + 1.96 * se), seed, estimator, n_censored, warnings)

    def as_json_dict(self) -> dict[str, object]:
        return {
            "mean": self.mean,
            "std_error": self.std_error,
            "n": self.n,
            "ci95": list(self.ci95),
            "seed": self.seed,
            "estimator": self.estimator,
            "n_censored": self.n_censored,
            "warnings": list(self.warnings),
        }


def _centered_start(domain, x) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=np.float64)
    if not domain.contains(x):
        raise geometry.GeometryError(f"start point {x.tolist()} is not inside the domain")
    center = np.asarray(getattr(domain, "center", ()) or np.zeros(domain.d))
    return x - center, center


def run_exit_batch(
    domain,
    x,
    n: int,
    params: PathParams | None = None,
    seed: int = 0,
    substream: int = 0,
    source=None,
):
    """Simulate n exits; returns (taus, exit_points, censored, maxabs1,
    steps, integrals) with exit points snapped to the boundary."""
    params = (params or PathParams()).resolved(domain)
    x0, center = _centered_start(domain, x)
    kind, pr = domain.kernel_encoding()
    taus, ends, censored, maxabs1, steps, integrals = _kernels.exit_paths(
        kind,
        pr,
        domain.d,
        x0,
        n,
        seed,
        (substream << 4) | SUB_EXIT,
        0,
        params.dt_base,
        params.kappa,
        params.dt_policy == "boundary_adaptive",
        params.shell_eps,
        params.max_steps,
        source,
    )
    exit_pts, _ = geometry.snap_to_boundary(domain, ends + center)
    return taus, exit_pts, censored, maxabs1, steps, integrals


def run_wos_batch(
    domain,
    x,
    n: int,
    wos_eps: float | None = None,
    seed: int = 0,
    substream: int = 0,
    max_steps: int = 100_000,
):
    """Walk-on-spheres exits from x; returns (exit_points, censored, steps)."""
    if wos_eps is None:
        wos_eps = 1e-6 * domain.diameter()
    x0, center = _centered_start(domain, x)
    kind, pr = domain.kernel_encoding()
    ends, censored, steps = _kernels.wos_paths(
        kind, pr, domain.d, x0, n, seed, (substream << 4) | SUB_WOS, 0, wos_eps, max_steps
    )
    exit_pts, _ = geometry.snap_to_boundary(domain, ends + center)
    return exit_pts, censored, steps


def sample_exit(
    domain,
    x,
    params: PathParams | None = None,
    f=None,
    seed: int = 0,
    path_index: int = 0,
    decomposition: str | None = None,
    r0: float | None = None,
) -> ExitSample:
    """Simulate a single exit path (stream = (seed, path_index))."""
    params = (params or PathParams()).resolved(domain)
    x0, center = _centered_start(domain, x)
    kind, pr = domain.kernel_encoding()
    taus, ends, censored, _, steps, integrals = _kernels.exit_paths(
        kind,
        pr,
        domain.d,
        x0,
        1,
        seed,
        SUB_EXIT,
        path_index,
        params.dt_base,
        params.kappa,
        params.dt_policy == "boundary_adaptive",
        params.shell_eps,
        params.max_steps,
        f,
    )
    pt, _ = geometry.snap_to_boundary(domain, ends[0] + center)
    cls = None
    if decomposition is not None:
        cls = geometry.classify_boundary(domain, pt, decomposition, r0)
    integral = float(integrals[0]) if integrals is not None else 0.0
    return ExitSample(
        tau=float(taus[0]),
        exit_point=pt,
        path_integral=integral,
        exit_class=cls,
        censored=bool(censored[0]),
        steps=int(steps[0]),
    )


def estimate_v_alpha(
    domain,
    x,
    alpha: float,
    n: int,
    params: PathParams | None = None,
    seed: int = 0,
    substream: int = 0,
) -> McEstimate:
    """Monte Carlo estimate of E[tau^alpha] started at x."""
    if n < 100:
        raise ValueError(f"need at least 100 paths for a meaningful estimate, got {n}")
    if alpha < 0.0:
        raise ValueError(f"moment exponent must be >= 0, got {alpha}")
    taus, _, censored, _, _, _ = run_exit_batch(domain, x, n, params, seed, substream)
    kept = taus[~censored]
    values = kept ** alpha
    return McEstimate.from_values(
        values, seed, f"v_moment[{alpha}]_em", n_censored=int(censored.sum())
    )


def estimate_h(
    domain,
    decomposition: str,
    x,
    n: int,
    params: PathParams | None = None,
    seed: int = 0,
    substream: int = 0,
    method: str = "wos",
    r0: float | None = None,
) -> McEstimate:
    """Probability of exiting through Gamma1 (the non-absorbing part) first.

    Walk-on-spheres samples the harmonic measure exactly (default); the
    Euler-Maruyama variant (method="em") honors the full PathParams.
    """
    if decomposition == geometry.DECOMP_ALL:
        return McEstimate(0.0, 0.0, n, (0.0, 0.0), seed, "h_trivial_all_gamma0")
    if method == "wos":
        wos_eps = (params.resolved(domain).wos_eps if params is not None else None)
        pts, censored, _ = run_wos_batch(domain, x, n, wos_eps, seed, substream)
        name = "h_wos"
    elif method == "em":
        _, pts, censored, _, _, _ = run_exit_batch(domain, x, n, params, seed, substream)
        name = "h_em"
    else:
        raise ValueError(f"unknown h estimation method {method!r}")
    kept = pts[~censored]
    gamma0 = geometry.classify_boundary_batch(domain, kept, decomposition, r0)
    values = (~gamma0).astype(np.float64)
    return McEstimate.from_values(values, seed, name, n_censored=int(censored.sum()))


def estimate_ug_wos(
    domain,
    g,
    x,
    n: int,
    wos_eps: float | None = None,
    seed: int = 0,
    substream: int = 0,
    max_steps: int = 100_000,
) -> McEstimate:
    """Harmonic extension u_g(x) = E[g(exit point)] by walk-on-spheres.

    g must accept an (n, d) array of boundary points and return n values.
    """
    pts, censored, _ = run_wos_batch(domain, x, n, wos_eps, seed, substream, max_steps)
    kept = pts[~censored]
    values = np.asarray(g(kept), dtype=np.float64)
    if values.shape != (len(kept),):
        raise ValueError("boundary data callback must return one value per point")
    return McEstimate.from_values(values, seed, "ug_wos", n_censored=int(censored.sum()))


def estimate_uf(
    domain,
    f,
    x,
    n: int,
    params: PathParams | None = None,
    seed: int = 0,
    substream: int = 0,
) -> McEstimate:
    """Source integral u_f(x) = E[int_0^tau f(B_t) dt], midpoint rule per step.

    f is a constant or a vectorized callable on (m, d) arrays of midpoints;
    the engine assumes f is bounded on the domain.
    """
    taus, _, censored, _, _, integrals = run_exit_batch(
        domain, x, n, params, seed, substream, source=(0.0 if f is None else f)
    )
    values = integrals[~censored]
    return McEstimate.from_values(values, seed, "uf_em", n_censored=int(censored.sum()))
