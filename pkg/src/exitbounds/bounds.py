"""Certificate evaluation: every analytic exit-time / boundary-regularity
bound as an explicit number with its constants, regime and validity recorded.

Conventions.  All one-point bounds are taken about a distinguished boundary
point x0: the cone vertex / wedge edge midpoint (the origin) for the cone
and wedge domains, and a marked point on the inner sphere for the annulus.
``v`` certificates bound the alpha/2 moment of the exit time, ``h``
certificates the probability of exiting through the non-absorbing boundary
part, both as functions of the distance s = ||x - x0||.

Certificates are upper bounds, so whenever a cruder uniform bound is smaller
the certificate value is clipped to it; both numbers stay on the record.  h
certificates are capped at 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import constants as cst
from . import geometry

__all__ = [
    "HolderParams",
    "DataSpec",
    "BoundCertificate",
    "RegimeError",
    "lower_bound_v",
    "uniform_bound_v",
    "bound_v_annulus",
    "bound_h_cone2d",
    "bound_v_cone2d",
    "bound_v_wedge3d",
    "reverse_doubling_solve",
    "bound_vh_reverse_doubling",
    "bound_ug",
    "bound_uf",
    "bound_gradient",
    "bound_green",
    "theta_source_decay",
]


class RegimeError(ValueError):
    """The requested bound is not claimed at this point."""


@dataclass(frozen=True)
class HolderParams:
    """Exponents of the data: Hölder exponent alpha, integrability gamma of
    the source, and the conjugate pair (p, q) used to split the source bound.

    gamma = inf selects the sup-norm branch of the source estimates.  The
    convention p = 1 <=> q = inf holds; exactly one of p, q may be given.
    """

    alpha: float
    gamma: float = math.inf
    q: float | None = None
    p: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0.0):
            raise ValueError(f"alpha must be a positive real, got {self.alpha!r}")
        p, q = self.p, self.q
        if p is None and q is None:
            p, q = 2.0, 2.0
        elif p is None:
            p = q / (q - 1.0) if q > 1.0 else math.inf
        elif q is None:
            q = p / (p - 1.0) if p > 1.0 else math.inf
        if not (p >= 1.0 and q >= 1.0):
            raise ValueError(f"conjugate exponents must be >= 1, got p={p} q={q}")
        inv = (0.0 if math.isinf(p) else 1.0 / p) + (0.0 if math.isinf(q) else 1.0 / q)
        if abs(inv - 1.0) > 1e-12:
            raise ValueError(f"p and q must be conjugate (1/p + 1/q = 1), got p={p} q={q}")
        object.__setattr__(self, "p", float(p))
        object.__setattr__(self, "q", float(q))

    def require_source_exponents(self, d: int) -> None:
        if math.isinf(self.gamma):
            return
        if self.gamma / self.q <= d / 2.0:
            raise ValueError(
                f"vacuous source bound: gamma/q = {self.gamma / self.q} <= d/2 = {d / 2}"
            )

    def require_alpha_in_unit(self) -> None:
        if not (0.0 < self.alpha < 1.0):
            raise ValueError(f"this bound needs 0 < alpha < 1, got alpha={self.alpha}")

    def require_alpha_not_one(self) -> None:
        if self.alpha == 1.0:
            raise ValueError(
                "alpha = 1 is excluded (0 < alpha != 1); use alpha = 1 - eps for Lipschitz data"
            )


@dataclass(frozen=True)
class DataSpec:
    """Seminorms of the boundary data and source term entering the bounds."""

    g_seminorm: float = 0.0       # |g|_alpha or the one-point variant
    g_sup_gap: float = 0.0        # sup over the far boundary of |g - g(x0)|
    f_norm: float = 0.0           # ||f||_{L^gamma} or ||f||_inf
    f_norm_kind: str = "inf"      # "inf" | "gamma"

    def __post_init__(self):
        for name in ("g_seminorm", "g_sup_gap", "f_norm"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise ValueError(f"{name} must be a nonnegative real, got {v!r}")
        if self.f_norm_kind not in ("inf", "gamma"):
            raise ValueError(f"f_norm_kind must be 'inf' or 'gamma', got {self.f_norm_kind!r}")


@dataclass(frozen=True)
class BoundCertificate:
    """One evaluated analytic bound.

    ``value`` is the effective bound (after capping by any trivially better
    uniform bound); ``raw_value`` is the regime formula itself; ``cap`` the
    uniform value when one applies.
    """

    value: float
    theorem: str
    regime: str
    quantity: str
    constants: dict[str, float] = field(default_factory=dict)
    valid: bool = True
    raw_value: float | None = None
    cap: float | None = None

    def as_json_dict(self) -> dict[str, object]:
        return {
            "value": self.value,
            "theorem": self.theorem,
            "regime": self.regime,
            "quantity": self.quantity,
            "constants": dict(sorted(self.constants.items())),
            "valid": self.valid,
            "raw_value": self.raw_value,
            "cap": self.cap,
        }


def _capped(raw: float, cap: float | None, **kw) -> BoundCertificate:
    if cap is not None and cap < raw:
        return BoundCertificate(value=cap, raw_value=raw, cap=cap, **kw)
    return BoundCertificate(value=raw, raw_value=raw, cap=cap, **kw)


def _dist(domain, x) -> float:
    return float(geometry.dist_to_boundary(domain, np.asarray(x, dtype=np.float64)))


def _norm(x) -> float:
    return float(np.linalg.norm(np.asarray(x, dtype=np.float64)))


# ---------------------------------------------------------------------------
# exit-time moment bounds

def lower_bound_v(domain, x, alpha: float, policy: str = cst.CANONICAL) -> BoundCertificate:
    """Lower bound dist(x, bdry)^(2a) / (d^((a-1)^+) C_{2a}) for E[tau^a]."""
    dist = _dist(domain, x)
    C2a = cst.bdg_constants(2.0 * alpha, policy).C_upper
    pref = float(domain.d) ** max(alpha - 1.0, 0.0) * C2a
    value = dist ** (2.0 * alpha) / pref
    return BoundCertificate(
        value=value,
        raw_value=value,
        theorem="v_lower_inscribed_ball",
        regime="boundary" if dist == 0.0 else "interior",
        quantity=f"v_moment[{alpha}]_lower",
        constants={"C_2alpha": C2a, "dist": dist},
    )


def uniform_bound_v(domain, alpha: float, policy: str = cst.CANONICAL) -> BoundCertificate:
    """Uniform bound C1(a, d) diam^(2a) for E[tau^a], any starting point."""
    C1 = cst.uniform_moment_constant(alpha, domain.d, policy)
    value = C1 * domain.diameter() ** (2.0 * alpha)
    return BoundCertificate(
        value=value,
        raw_value=value,
        theorem="v_uniform_diameter",
        regime="uniform",
        quantity=f"v_moment[{alpha}]_upper",
        constants={"C1_alpha_d": C1},
    )


def _uniform_cap_v_half(domain, alpha: float, policy: str) -> float:
    """Uniform bound for the alpha/2 exit-time moment, used to clip certificates."""
    return uniform_bound_v(domain, alpha / 2.0, policy).value


def bound_v_annulus(domain: geometry.Annulus, x, alpha: float, policy: str = cst.CANONICAL) -> BoundCertificate:
    """Upper bound for E[tau^(a/2)] on an annulus, near the inner sphere.

    Near regime (x on the inner side with dist < r/d):
        dist^a e^a [4/((1-a) c_a) + ((R-r)/r)^(a/2) d^(a/2)]
    otherwise the rescaled uniform bound diam^a d^(a/2) / r^a * dist^a.
    """
    if not isinstance(domain, geometry.Annulus):
        raise ValueError("bound_v_annulus needs an annulus domain")
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"needs 0 < alpha < 1, got {alpha}")
    pts = np.asarray(x, dtype=np.float64)
    rel = pts - np.asarray(domain.center)
    rho = _norm(rel)
    dist = _dist(domain, x)
    d = domain.d
    r, R = domain.r, domain.R
    cap = _uniform_cap_v_half(domain, alpha, policy)
    inner_side = (rho - r) <= (R - rho)
    if inner_side and dist < r / d:
        c_a = cst.bdg_constants(alpha, policy).c_lower
        bracket = 4.0 / ((1.0 - alpha) * c_a) + ((R - r) / r) ** (alpha / 2.0) * d ** (alpha / 2.0)
        raw = dist ** alpha * math.exp(alpha) * bracket
        return _capped(
            raw,
            cap,
            theorem="v_annulus_inner",
            regime="near_inner",
            quantity=f"v_moment[{alpha / 2.0}]_upper",
            constants={"c_alpha": c_a, "bracket": bracket, "dist": dist},
        )
    C1h = cst.uniform_moment_constant(alpha / 2.0, d, policy)
    raw = domain.diameter() ** alpha * d ** (alpha / 2.0) / r ** alpha * dist ** alpha
    return _capped(
        raw,
        cap,
        theorem="v_annulus_far",
        regime="far",
        quantity=f"v_moment[{alpha / 2.0}]_upper",
        constants={"C1_half_alpha_d": C1h, "dist": dist},
    )


def _cone_scale(omega: float) -> float:
    """Claimed validity radius factor exp(-1/tilde_omega) of the cone bounds."""
    return math.exp(-1.0 / cst.tilde_omega(omega))


def bound_h_cone2d(omega: float, r: float, x_or_s) -> BoundCertificate:
    """Planar cone-vertex decay of the harmonic measure of the far boundary:
    h <= tw (s/r)^tw log(r/s), claimed for s < r e^(-1/tw); capped at 1.
    """
    if not (0.0 < omega < math.pi):
        raise ValueError(f"cone angle must lie in (0, pi), got {omega}")
    s = x_or_s if np.isscalar(x_or_s) else _norm(x_or_s)
    tw = cst.tilde_omega(omega)
    edge = r * _cone_scale(omega)
    if not (0.0 <= s < edge):
        raise RegimeError(
            f"harmonic-measure bound not claimed at s={s:.6g} (needs s < {edge:.6g})"
        )
    raw = tw * (s / r) ** tw * math.log(r / s) if s > 0.0 else 0.0
    return _capped(
        raw,
        1.0,
        theorem="h_cone2d_vertex",
        regime="near_vertex",
        quantity="h_upper",
        constants={"tilde_omega": tw, "s": s},
    )


def bound_v_cone2d(
    omega: float,
    r: float,
    domain_diam: float,
    x_or_s,
    alpha: float,
    policy: str = cst.CANONICAL,
    d: int = 2,
) -> BoundCertificate:
    """Upper bound for E[tau^(a/2)] near a planar reentrant cone vertex.

    Near regime (s < r e^(-1/tw)):
        C3 (s/r)^((1^a) tw) [log(r/s)]^(1^a) + C4 (s/r)^tw log(r/s)
    far regime: C1(a/2, d) diam^a e (s/r)^tw.
    """
    if alpha == 1.0:
        raise ValueError("alpha = 1 is excluded here (0 < alpha != 1)")
    if not (0.0 < omega <= math.pi / 2.0):
        raise ValueError(f"cone angle must lie in (0, pi/2], got {omega}")
    s = x_or_s if np.isscalar(x_or_s) else _norm(x_or_s)
    tw = cst.tilde_omega(omega)
    a1 = min(1.0, alpha)
    # uniform cap for the ambient domain, not just the benchmark cone-ball
    cap = cst.uniform_moment_constant(alpha / 2.0, d, policy) * domain_diam ** alpha
    if s < r * _cone_scale(omega):
        C2c = cst.cone_vertex_constant(alpha, r, policy)
        C3 = 2.0 * C2c * tw ** alpha
        C4 = cst.uniform_moment_constant(alpha / 2.0, 2, policy) * (domain_diam + r) ** alpha * tw
        lg = math.log(r / s) if s > 0.0 else 0.0
        raw = 0.0
        if s > 0.0:
            raw = C3 * (s / r) ** (a1 * tw) * lg ** a1 + C4 * (s / r) ** tw * lg
        return _capped(
            raw,
            cap,
            theorem="v_cone2d_vertex",
            regime="near_vertex",
            quantity=f"v_moment[{alpha / 2.0}]_upper",
            constants={"C3": C3, "C4": C4, "tilde_omega": tw, "s": s},
        )
    C1h = cst.uniform_moment_constant(alpha / 2.0, d, policy)
    raw = C1h * domain_diam ** alpha * math.e * (s / r) ** tw
    return _capped(
        raw,
        cap,
        theorem="v_cone2d_far",
        regime="far",
        quantity=f"v_moment[{alpha / 2.0}]_upper",
        constants={"C1_half_alpha_d": C1h, "tilde_omega": tw, "s": s},
    )


def bound_v_wedge3d(
    omega: float,
    r: float,
    l: float,
    domain_diam: float,
    x,
    alpha: float,
    policy: str = cst.CANONICAL,
) -> BoundCertificate:
    """Upper bound for E[tau^(a/2)] near the edge of a reentrant wedge in 3d.

    Uses the planar projection s1 = ||(x1, x2)||; near regime needs
    s1 <= r e^(-1/tw) and |x3| <= l, otherwise the rescaled uniform bound
    C1(a/2,3) diam^a (e v (r/l)^tw) (||x||/r)^tw applies.
    """
    if alpha == 1.0:
        raise ValueError("alpha = 1 is excluded here (0 < alpha != 1)")
    if not (0.0 < omega <= math.pi / 2.0):
        raise ValueError(f"wedge angle must lie in (0, pi/2], got {omega}")
    pts = np.asarray(x, dtype=np.float64)
    if pts.shape != (3,):
        raise ValueError("wedge bound needs a 3-dimensional point")
    s1 = float(math.hypot(pts[0], pts[1]))
    s_full = _norm(pts)
    tw = cst.tilde_omega(omega)
    a1 = min(1.0, alpha)
    cap = cst.uniform_moment_constant(alpha / 2.0, 3, policy) * domain_diam ** alpha
    if s1 <= r * _cone_scale(omega) and abs(pts[2]) <= l and s1 < r:
        C2c = cst.cone_vertex_constant(alpha, r, policy)
        C3 = 2.0 * C2c * tw ** alpha
        C8 = (
            cst.uniform_moment_constant(alpha / 2.0, 3, policy)
            * (domain_diam + r + l) ** alpha
            * tw
        )
        lg = math.log(r / s1) if s1 > 0.0 else 0.0
        raw = 0.0
        if s1 > 0.0:
            raw = C3 * (s1 / r) ** (a1 * tw) * lg ** a1 + C8 * (s1 / r) ** tw * lg
        return _capped(
            raw,
            cap,
            theorem="v_wedge3d_edge",
            regime="near_edge",
            quantity=f"v_moment[{alpha / 2.0}]_upper",
            constants={"C3": C3, "C8": C8, "tilde_omega": tw, "s1": s1},
        )
    C1h = cst.uniform_moment_constant(alpha / 2.0, 3, policy)
    raw = (
        C1h
        * domain_diam ** alpha
        * max(math.e, (r / l) ** tw)
        * (s_full / r) ** tw
    )
    return _capped(
        raw,
        cap,
        theorem="v_wedge3d_far",
        regime="far",
        quantity=f"v_moment[{alpha / 2.0}]_upper",
        constants={"C1_half_alpha_d": C1h, "tilde_omega": tw, "s": s_full},
    )


# ---------------------------------------------------------------------------
# dyadic decay (reverse doubling)

def reverse_doubling_solve(
    c: float, a: float, delta: float, r0: float, phi_sup: float, r: float
) -> float:
    """Closed-form consequence of Phi(r) <= c r^a + delta Phi(2r) on [0, r0].

    After rescaling to r0 = 1 (s = r/r0):
        delta < 2^-a:  c r0^a s^a / (1 - 2^a delta) + s^|log2 delta| phi_sup / delta
        delta > 2^-a:  [c r0^a / (2^a delta - 1) + phi_sup / delta] s^|log2 delta|
        delta = 2^-a:  [c r0^a log2(1/s) + phi_sup / delta] s^a
    """
    if not (0.0 < delta < 1.0):
        raise ValueError(f"contraction factor must lie in (0, 1), got {delta}")
    if c < 0.0 or a < 0.0 or phi_sup < 0.0 or r0 <= 0.0:
        raise ValueError("requires c >= 0, a >= 0, phi_sup >= 0, r0 > 0")
    if r > r0 / 2.0:
        raise ValueError(f"the decay bound holds only for r <= r0/2, got r={r} r0={r0}")
    if r < 0.0:
        raise ValueError(f"radius must be nonnegative, got {r}")
    s = r / r0
    if s == 0.0:
        return 0.0
    expo = abs(math.log2(delta))
    two_a = 2.0 ** a
    head = c * r0 ** a
    if delta < 1.0 / two_a:
        return head * s ** a / (1.0 - two_a * delta) + s ** expo * phi_sup / delta
    if delta > 1.0 / two_a:
        return (head / (two_a * delta - 1.0) + phi_sup / delta) * s ** expo
    return (head * math.log2(1.0 / s) + phi_sup / delta) * s ** a


def bound_vh_reverse_doubling(
    domain,
    x,
    alpha: float,
    delta: float | None = None,
    r0: float | None = None,
    policy: str = cst.CANONICAL,
) -> tuple[BoundCertificate, BoundCertificate]:
    """Exit-moment and harmonic-measure decay from a one-scale contraction.

    For a cone-type domain in d >= 3 the contraction factor defaults to the
    cap-area estimate delta_omega_bound(omega, d).  Claimed for ||x|| < r0/2.
    Returns (h certificate, v certificate); the v certificate bounds the
    alpha/2 exit-time moment.
    """
    d = domain.d
    if delta is None:
        if not isinstance(domain, geometry.BallMinusCone) or d < 3:
            raise ValueError("automatic contraction factor needs a cone domain in d >= 3")
        delta = cst.delta_omega_bound(domain.omega, d)
    if not (0.0 < delta < 1.0):
        raise ValueError(f"contraction factor must lie in (0, 1), got {delta}")
    if r0 is None:
        if not isinstance(domain, geometry.BallMinusCone):
            raise ValueError("r0 must be given for non-cone domains")
        r0 = domain.r
    s_abs = _norm(x)
    if s_abs >= r0 / 2.0:
        raise RegimeError(f"decay bound not claimed at ||x||={s_abs:.6g} (needs < r0/2 = {r0 / 2.0:.6g})")
    s = s_abs / r0
    expo = abs(math.log2(delta))
    h_raw = s ** expo / delta if s > 0.0 else 0.0
    h_cert = _capped(
        h_raw,
        1.0,
        theorem="h_dyadic_decay",
        regime="near_vertex",
        quantity="h_upper",
        constants={"delta": delta, "decay_exponent": expo},
    )

    if alpha == 1.0:
        raise ValueError("alpha = 1 is excluded here (0 < alpha != 1)")
    c = cst.moment_switch_constant(alpha, d, policy)
    diam = domain.diameter()
    phi_sup = diam ** (2.0 * alpha) / float(d) ** alpha
    v_raw = reverse_doubling_solve(c, alpha, delta, r0, phi_sup, s_abs)
    two_a = 2.0 ** alpha
    if delta < 1.0 / two_a:
        regime = "contraction_fast"
    elif delta > 1.0 / two_a:
        regime = "contraction_slow"
    else:
        regime = "contraction_log"
    cap = _uniform_cap_v_half(domain, alpha, policy)
    v_cert = _capped(
        v_raw,
        cap,
        theorem="v_dyadic_decay",
        regime=regime,
        quantity=f"v_moment[{alpha / 2.0}]_upper",
        constants={"delta": delta, "c_d_alpha": c, "phi_sup": phi_sup, "decay_exponent": expo},
    )
    return h_cert, v_cert


# ---------------------------------------------------------------------------
# boundary Hölder bounds for the harmonic extension and the source integral

_CONDITIONS = ("sphere", "cone2d", "wedge3d", "coneHD")


def _condition_domain_check(condition: str, domain) -> None:
    if condition == "sphere" and not isinstance(domain, geometry.Annulus):
        raise ValueError("the exterior-sphere bounds are evaluated on an annulus benchmark")
    if condition == "cone2d" and not (isinstance(domain, geometry.BallMinusCone) and domain.d == 2):
        raise ValueError("the planar cone bounds need a 2d ball-minus-cone domain")
    if condition == "wedge3d" and not isinstance(domain, geometry.CylinderMinusWedge):
        raise ValueError("the wedge bounds need a cylinder-minus-wedge domain")
    if condition == "coneHD" and not (isinstance(domain, geometry.BallMinusCone) and domain.d >= 3):
        raise ValueError("the high-dimensional cone bounds need a ball-minus-cone domain in d >= 3")
    if condition not in _CONDITIONS:
        raise ValueError(f"unknown boundary condition {condition!r}; use one of {_CONDITIONS}")


def _anchor_distance(condition: str, domain, x) -> float:
    """Distance from x to the distinguished boundary point x0."""
    pts = np.asarray(x, dtype=np.float64)
    if condition == "sphere":
        x0 = np.asarray(domain.center, dtype=np.float64).copy()
        x0[0] += domain.r
        return float(np.linalg.norm(pts - x0))
    return float(np.linalg.norm(pts))


def bound_ug(
    condition: str,
    domain,
    x,
    params: HolderParams,
    data: DataSpec,
    policy: str = cst.CANONICAL,
    two_point: bool = False,
) -> BoundCertificate:
    """Pointwise bound for |u_g(x) - g(x0)| with g alpha-Hölder at x0.

    With ``two_point`` set (admissible for alpha < 1 under a uniform exterior
    condition) the near-regime constant doubles and the bound controls
    |u_g(x) - u_g(y)| at separation s.
    """
    _condition_domain_check(condition, domain)
    alpha = params.alpha
    if two_point and not (0.0 < alpha < 1.0):
        raise ValueError("two-point bounds need 0 < alpha < 1")
    g = data.g_seminorm
    s = _anchor_distance(condition, domain, x)
    d = domain.d
    diam = domain.diameter()
    mult = 2.0 if two_point else 1.0

    if condition == "sphere":
        params.require_alpha_in_unit()
        r, R = domain.r, domain.R
        C = cst.sphere_constant(alpha, d, R, r, policy)
        if s <= r / d:
            raw = mult * C * g * s ** alpha
            regime = "near"
        else:
            raw = diam ** alpha * d ** (alpha / 2.0) / r ** alpha * g * s ** alpha
            regime = "far"
        return BoundCertificate(
            value=raw,
            raw_value=raw,
            theorem="ug_sphere",
            regime=regime,
            quantity="u_g_upper",
            constants={"C_alpha_d_R_r": C, "s": s},
        )

    if condition == "cone2d":
        params.require_alpha_in_unit()
        r = domain.r
        tw = cst.tilde_omega(domain.omega)
        if s >= r:
            raise RegimeError(f"harmonic-extension bound not claimed at s={s:.6g} >= r={r:.6g}")
        c_a = cst.bdg_constants(alpha, policy).c_lower
        Cad = cst.multidim_bdg_constant(alpha, 2, policy)
        C5 = Cad * tw ** alpha * 8.0 * r ** alpha / ((1.0 - alpha) * c_a)
        C6 = Cad * (diam + r) ** alpha * tw / 2.0 ** (alpha / 2.0)
        lg = math.log(r / s) if s > 0.0 else 0.0
        far_ind = 1.0 if s >= r * _cone_scale(domain.omega) else 0.0
        raw = 0.0
        if s > 0.0:
            raw = mult * g * (
                C5 * (s / r) ** (alpha * tw) * lg ** alpha
                + (s / r) ** tw * (C6 * lg + math.e * diam ** alpha / 2.0 ** (alpha / 2.0) * far_ind)
                + s ** alpha
            )
        return BoundCertificate(
            value=raw,
            raw_value=raw,
            theorem="ug_cone2d",
            regime="far" if far_ind else "near",
            quantity="u_g_upper",
            constants={"C5": C5, "C6": C6, "tilde_omega": tw, "s": s},
        )

    if condition == "wedge3d":
        params.require_alpha_in_unit()
        r, l = domain.r, domain.l
        tw = cst.tilde_omega(domain.omega)
        if s >= r:
            raise RegimeError(f"harmonic-extension bound not claimed at s={s:.6g} >= r={r:.6g}")
        Cad3 = cst.multidim_bdg_constant(alpha, 3, policy)
        C2c = cst.cone_vertex_constant(alpha, r, policy)
        C3 = 2.0 * C2c * tw ** alpha
        C8 = cst.uniform_moment_constant(alpha / 2.0, 3, policy) * (diam + r + l) ** alpha * tw
        C9 = Cad3 * C3
        C10 = Cad3 * C8
        edge = min(l, r * _cone_scale(domain.omega))
        near_ind = 1.0 if s < edge else 0.0
        lg = math.log(r / s) if s > 0.0 else 0.0
        raw = 0.0
        if s > 0.0:
            raw = mult * g * (
                C9 * (s / r) ** (alpha * tw) * lg ** alpha * near_ind
                + (s / r) ** tw
                * (
                    C10 * lg * near_ind
                    + diam ** alpha / 3.0 ** (alpha / 2.0) * max(math.e, (r / l) ** tw) * (1.0 - near_ind)
                )
                + s ** alpha
            )
        return BoundCertificate(
            value=raw,
            raw_value=raw,
            theorem="ug_wedge3d",
            regime="near" if near_ind else "far",
            quantity="u_g_upper",
            constants={"C9": C9, "C10": C10, "tilde_omega": tw, "s": s},
        )

    # coneHD
    params.require_alpha_in_unit()
    r0 = domain.r
    dw = cst.delta_omega_bound(domain.omega, d)
    expo = abs(math.log2(dw))
    if s < r0 / 2.0:
        C1, C2, _, _ = cst.reverse_doubling_pair(alpha, d, dw, r0, diam, policy)
        raw = mult * g * (C1 * s ** alpha + C2 * s ** expo)
        regime = "near"
        consts = {"C1": C1, "C2": C2, "delta_omega": dw, "s": s}
    else:
        raw = mult * g * diam ** alpha / d ** (alpha / 2.0) * (2.0 / r0) ** alpha * s ** alpha
        regime = "far"
        consts = {"delta_omega": dw, "s": s}
    return BoundCertificate(
        value=raw,
        raw_value=raw,
        theorem="ug_coneHD",
        regime=regime,
        quantity="u_g_upper",
        constants=consts,
    )


def theta_source_decay(
    d: int,
    delta: float,
    r0: float,
    diam: float,
    s: float,
    policy: str = cst.CANONICAL,
) -> float:
    """Decay envelope theta(s) for the source integral under a cone condition.

    Built from the dyadic decay of the mean exit time (exponent 2):
        s >= r0/2:   diam^2/d (2/r0)^2 s^2
        delta < 1/4: c s^2/(1-4 delta) + diam^4/(delta d^2) (s/r0)^|log2 delta|
        delta > 1/4: [c r0^2/(4 delta - 1) + diam^4/(delta d^2)] (s/r0)^|log2 delta|
        delta = 1/4: [c r0^2 log2(r0/s) + 4 diam^4/d^2] (s/r0)^2
    with c the exponent-2 moment-switch constant.
    """
    if not (0.0 < delta < 1.0):
        raise ValueError(f"contraction factor must lie in (0, 1), got {delta}")
    if s >= r0 / 2.0:
        return diam ** 2 / d * (2.0 / r0) ** 2 * s ** 2
    if s == 0.0:
        return 0.0
    c = cst.moment_switch_constant(2.0, d, policy)
    sn = s / r0
    expo = abs(math.log2(delta))
    tail = diam ** 4 / (delta * d ** 2)
    if delta < 0.25:
        return c * r0 ** 2 * sn ** 2 / (1.0 - 4.0 * delta) + tail * sn ** expo
    if delta > 0.25:
        return (c * r0 ** 2 / (4.0 * delta - 1.0) + tail) * sn ** expo
    return (c * r0 ** 2 * math.log2(1.0 / sn) + 4.0 * diam ** 4 / d ** 2) * sn ** 2


def bound_uf(
    condition: str,
    domain,
    x,
    params: HolderParams,
    data: DataSpec,
    policy: str = cst.CANONICAL,
) -> BoundCertificate:
    """Pointwise bound for |u_f(x)| near the distinguished boundary point.

    Uses the sup-norm branch when params.gamma is infinite (data.f_norm is
    then ||f||_inf), otherwise the L^gamma branch with the conjugate split
    (p, q) from params.
    """
    _condition_domain_check(condition, domain)
    f = data.f_norm
    s = _anchor_distance(condition, domain, x)
    d = domain.d
    diam = domain.diameter()
    sup_branch = math.isinf(params.gamma)
    if not sup_branch:
        params.require_source_exponents(d)
        Cf = cst.source_constant(d, diam, params.gamma, params.q)
        p = params.p

    if condition == "sphere":
        r, R = domain.r, domain.R
        base = (R - r) * R / r
        if sup_branch:
            raw = s * f * base
        else:
            raw = Cf * s ** (1.0 / p) * base ** (1.0 / p) * f
        return BoundCertificate(
            value=raw,
            raw_value=raw,
            theorem="uf_sphere",
            regime="sup" if sup_branch else "Lgamma",
            quantity="u_f_upper",
            constants={"s": s} if sup_branch else {"C_f": Cf, "s": s},
        )

    if condition == "cone2d":
        r = domain.r
        tw = cst.tilde_omega(domain.omega)
        if s >= r:
            raise RegimeError(f"source bound not claimed at s={s:.6g} >= r={r:.6g}")
        C2_2 = cst.cone_vertex_constant(2.0, r, policy)
        C3_2 = 2.0 * C2_2 * tw ** 2
        C4_2 = cst.uniform_moment_constant(1.0, 2, policy) * (diam + r) ** 2 * tw
        C7 = C3_2 + C4_2
        lg = math.log(r / s) if s > 0.0 else 0.0
        far_ind = 1.0 if s >= r * _cone_scale(domain.omega) else 0.0
        bracket = C7 * lg + math.e * diam ** 2 / 2.0 * far_ind
        if s == 0.0:
            raw = 0.0
        elif sup_branch:
            raw = f * (s / r) ** tw * bracket
        else:
            raw = Cf * f * (s / r) ** (tw / p) * bracket ** (1.0 / p)
        return BoundCertificate(
            value=raw,
            raw_value=raw,
            theorem="uf_cone2d",
            regime="sup" if sup_branch else "Lgamma",
            quantity="u_f_upper",
            constants={"C7": C7, "tilde_omega": tw, "s": s},
        )

    if condition == "wedge3d":
        r, l = domain.r, domain.l
        tw = cst.tilde_omega(domain.omega)
        if s >= r:
            raise RegimeError(f"source bound not claimed at s={s:.6g} >= r={r:.6g}")
        C2_2 = cst.cone_vertex_constant(2.0, r, policy)
        C3_2 = 2.0 * C2_2 * tw ** 2
        C8_2 = cst.uniform_moment_constant(1.0, 3, policy) * (diam + r + l) ** 2 * tw
        C11 = C3_2 + C8_2
        edge = min(l, r * _cone_scale(domain.omega))
        near_ind = 1.0 if s < edge else 0.0
        lg = math.log(r / s) if s > 0.0 else 0.0
        bracket = C11 * lg * near_ind + diam ** 2 / 3.0 * max(math.e, (r / l) ** tw) * (
            1.0 - near_ind
        )
        if s == 0.0:
            raw = 0.0
        elif sup_branch:
            raw = f * (s / r) ** tw * bracket
        else:
            raw = Cf * f * (s / r) ** (tw / p) * bracket ** (1.0 / p)
        return BoundCertificate(
            value=raw,
            raw_value=raw,
            theorem="uf_wedge3d",
            regime="sup" if sup_branch else "Lgamma",
            quantity="u_f_upper",
            constants={"C11": C11, "tilde_omega": tw, "s": s},
        )

    # coneHD
    r0 = domain.r
    dw = cst.delta_omega_bound(domain.omega, d)
    th = theta_source_decay(d, dw, r0, diam, s, policy)
    if sup_branch:
        raw = f * th
    else:
        raw = Cf * f * th ** (1.0 / params.p)
    return BoundCertificate(
        value=raw,
        raw_value=raw,
        theorem="uf_coneHD",
        regime="sup" if sup_branch else "Lgamma",
        quantity="u_f_upper",
        constants={"theta": th, "delta_omega": dw, "s": s},
    )


def bound_gradient(
    condition: str,
    domain,
    x,
    params: HolderParams,
    data: DataSpec,
    policy: str = cst.CANONICAL,
    uniform_condition: bool = False,
) -> BoundCertificate:
    """Interior gradient bound for the harmonic extension of Hölder data.

    Derived from the mean-value property over the ball of radius
    eta = dist(x, bdry) clipped to the validity radius of the matching
    two-point Hölder bound; requires the exterior condition to hold
    uniformly over the boundary (flag ``uniform_condition``).
    """
    _condition_domain_check(condition, domain)
    if not uniform_condition:
        raise ValueError(
            "gradient bounds need the uniform exterior condition flag (two-point bounds)"
        )
    params.require_alpha_in_unit()
    alpha = params.alpha
    g = data.g_seminorm
    d = domain.d
    dist = _dist(domain, x)
    if dist <= 0.0:
        raise RegimeError("gradient bound needs an interior point")
    diam = domain.diameter()

    if condition == "sphere":
        r, R = domain.r, domain.R
        eta = min(dist, r / d)
        C = cst.sphere_constant(alpha, d, R, r, policy)
        raw = eta ** (alpha - 1.0) * g * 2.0 * d * C
        consts = {"C_alpha_d_R_r": C, "eta": eta}
        theorem = "grad_ug_sphere"
    elif condition == "cone2d":
        r = domain.r
        tw = cst.tilde_omega(domain.omega)
        eta = min(dist, r * _cone_scale(domain.omega))
        c_a = cst.bdg_constants(alpha, policy).c_lower
        Cad = cst.multidim_bdg_constant(alpha, 2, policy)
        C5 = Cad * tw ** alpha * 8.0 * r ** alpha / ((1.0 - alpha) * c_a)
        C6 = Cad * (diam + r) ** alpha * tw / 2.0 ** (alpha / 2.0)
        lg = abs(math.log(eta / r))
        raw = 2.0 * d * g * (
            C5 * eta ** (alpha * tw - 1.0) * r ** (-alpha * tw) * lg ** alpha
            + C6 * eta ** (tw - 1.0) * r ** (-tw) * lg
            + eta ** (alpha - 1.0)
        )
        consts = {"C5": C5, "C6": C6, "eta": eta}
        theorem = "grad_ug_cone2d"
    elif condition == "wedge3d":
        r, l = domain.r, domain.l
        tw = cst.tilde_omega(domain.omega)
        eta = min(dist, l, r * _cone_scale(domain.omega))
        Cad3 = cst.multidim_bdg_constant(alpha, 3, policy)
        C2c = cst.cone_vertex_constant(alpha, r, policy)
        C3 = 2.0 * C2c * tw ** alpha
        C8 = cst.uniform_moment_constant(alpha / 2.0, 3, policy) * (diam + r + l) ** alpha * tw
        C9 = Cad3 * C3
        C10 = Cad3 * C8
        lg = abs(math.log(eta / r))
        raw = 2.0 * d * g * (
            C9 * eta ** (alpha * tw - 1.0) * r ** (-alpha * tw) * lg ** alpha
            + C10 * eta ** (tw - 1.0) * r ** (-tw) * lg
            + eta ** (alpha - 1.0)
        )
        consts = {"C9": C9, "C10": C10, "eta": eta}
        theorem = "grad_ug_wedge3d"
    else:  # coneHD
        r0 = domain.r
        dw = cst.delta_omega_bound(domain.omega, d)
        eta = min(dist, r0 / 2.0)
        C1, C2, _, _ = cst.reverse_doubling_pair(alpha, d, dw, r0, diam, policy)
        expo = abs(math.log2(dw))
        raw = 2.0 * d * g * (C1 * eta ** (alpha - 1.0) + C2 * eta ** (expo - 1.0))
        consts = {"C1": C1, "C2": C2, "eta": eta, "delta_omega": dw}
        theorem = "grad_ug_coneHD"

    return BoundCertificate(
        value=raw,
        raw_value=raw,
        theorem=theorem,
        regime="interior",
        quantity="grad_ug_upper",
        constants=consts,
    )


def bound_green(
    condition: str,
    domain,
    x,
    y,
    params: HolderParams,
    policy: str = cst.CANONICAL,
) -> BoundCertificate:
    """Boundary decay bound for the Green function G_D(x, y), d >= 3.

    When dist(y, bdry) < a/(2(d-2+a)) ||x-y|| the Hölder route applies with
    prefactor gamma_{d,a} / ||x-y||^(d-2+a); otherwise the direct kernel
    comparison gives (2(d-2+a)/a)^a gamma_d dist(y)^a / ||x-y||^(d-2+a).
    """
    if condition == "cone2d":
        raise ValueError("Green bounds are only stated for d >= 3")
    _condition_domain_check(condition, domain)
    d = domain.d
    if d < 3:
        raise ValueError(f"Green bounds need d >= 3, got d={d}")
    params.require_alpha_in_unit()
    alpha = params.alpha
    xv = np.asarray(x, dtype=np.float64)
    yv = np.asarray(y, dtype=np.float64)
    sep = float(np.linalg.norm(xv - yv))
    if sep == 0.0:
        raise ValueError("Green bound needs x != y")
    dist_y = _dist(domain, yv)
    g_d = cst.newtonian_constant(d)
    if dist_y >= alpha / (2.0 * (d - 2.0 + alpha)) * sep:
        raw = (2.0 * (d - 2.0 + alpha) / alpha) ** alpha * g_d * dist_y ** alpha / sep ** (
            d - 2.0 + alpha
        )
        return BoundCertificate(
            value=raw,
            raw_value=raw,
            theorem="green_kernel_direct",
            regime="y_near_x",
            quantity="green_upper",
            constants={"gamma_d": g_d, "sep": sep, "dist_y": dist_y},
        )
    g_da = cst.green_holder_constant(alpha, d)
    pref = g_da / sep ** (d - 2.0 + alpha)
    diam = domain.diameter()
    if condition == "sphere":
        r = domain.r
        C = cst.sphere_constant(alpha, d, domain.R, r, policy)
        if dist_y <= r / d:
            bracket = C * dist_y ** alpha
        else:
            bracket = diam ** alpha * d ** (alpha / 2.0) / r ** alpha * dist_y ** alpha
        theorem = "green_sphere"
    elif condition == "wedge3d":
        r, l = domain.r, domain.l
        tw = cst.tilde_omega(domain.omega)
        Cad3 = cst.multidim_bdg_constant(alpha, 3, policy)
        C2c = cst.cone_vertex_constant(alpha, r, policy)
        C9 = Cad3 * 2.0 * C2c * tw ** alpha
        C10 = Cad3 * cst.uniform_moment_constant(alpha / 2.0, 3, policy) * (
            diam + r + l
        ) ** alpha * tw
        edge = min(l, r * _cone_scale(domain.omega))
        near = dist_y < edge
        lg = math.log(r / dist_y) if 0.0 < dist_y < r else 0.0
        if near and dist_y > 0.0:
            bracket = (
                C9 * (dist_y / r) ** (alpha * tw) * lg ** alpha
                + (dist_y / r) ** tw * C10 * lg
                + dist_y ** alpha
            )
        else:
            bracket = (
                (dist_y / r) ** tw
                * diam ** alpha
                / 3.0 ** (alpha / 2.0)
                * max(math.e, (r / l) ** tw)
                + dist_y ** alpha
            )
        theorem = "green_wedge3d"
    else:  # coneHD
        r0 = domain.r
        dw = cst.delta_omega_bound(domain.omega, d)
        expo = abs(math.log2(dw))
        if dist_y < r0 / 2.0:
            C1, C2, _, _ = cst.reverse_doubling_pair(alpha, d, dw, r0, diam, policy)
            bracket = C1 * dist_y ** alpha + C2 * dist_y ** expo
        else:
            bracket = diam ** alpha / d ** (alpha / 2.0) * (2.0 / r0) ** alpha * dist_y ** alpha
        theorem = "green_coneHD"
    raw = pref * bracket
    return BoundCertificate(
        value=raw,
        raw_value=raw,
        theorem=theorem,
        regime="y_near_boundary",
        quantity="green_upper",
        constants={"gamma_d_alpha": g_da, "sep": sep, "dist_y": dist_y},
    )
