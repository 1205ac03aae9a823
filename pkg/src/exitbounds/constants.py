"""Explicit constants for the exit-time and boundary-regularity bounds.

Every constant is a pure function of the Hölder exponent, the dimension, and
a few geometric lengths, so two runs with the same inputs and the same
martingale-inequality variant policy produce bit-identical numbers.  The
martingale moment inequalities admit several published constant pairs; the
``canonical`` policy always picks the first admissible pair, ``best`` takes
the envelope (largest lower constant, smallest upper constant) over all
admissible pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .specialfn import gamma_fn, unit_ball_volume

__all__ = [
    "Policy",
    "BdgConstants",
    "ConstantTable",
    "bdg_constants",
    "multidim_bdg_constant",
    "uniform_moment_constant",
    "source_constant",
    "sphere_constant",
    "tilde_omega",
    "delta_omega_bound",
    "doob_factor",
    "moment_switch_constant",
    "cone_vertex_constant",
    "newtonian_constant",
    "green_holder_constant",
    "derived_constants",
]

CANONICAL = "canonical"
BEST = "best"
Policy = str  # "canonical" | "best"


def _check_policy(policy: Policy) -> None:
    if policy not in (CANONICAL, BEST):
        raise ValueError(f"unknown constant policy {policy!r}; use 'canonical' or 'best'")


def _pos_part(x: float) -> float:
    return x if x > 0.0 else 0.0


@dataclass(frozen=True)
class BdgConstants:
    """Two-sided moment comparison constants c <= C for a given exponent."""

    c_lower: float
    C_upper: float
    variants_used: tuple[str, str]

    def __post_init__(self) -> None:
        if not (0.0 < self.c_lower <= self.C_upper):
            raise ValueError(f"invalid constant pair ({self.c_lower}, {self.C_upper})")


def bdg_constants(alpha: float, policy: Policy = CANONICAL) -> BdgConstants:
    """Constants (c, C) with c E[tau^(a/2)] <= E[(max |M|)^a] <= C E[tau^(a/2)].

    Admissible variants: the ratio pair ((2-a)/(4-a), (4-a)/(2-a)) for a < 2,
    the power pair ((2/a)^(a/2)(2-a)/2, (2/a)^(a/2) 2/(2-a)) for a < 2, and
    the linear pair (1/(2 sqrt(2) a), 2 sqrt(2) a) for a > 1.
    """
    _check_policy(policy)
    if not (math.isfinite(alpha) and alpha > 0.0):
        raise ValueError(f"exponent must be > 0, got {alpha!r}")
    lowers: list[tuple[float, str]] = []
    uppers: list[tuple[float, str]] = []
    if alpha < 2.0:
        lowers.append(((2.0 - alpha) / (4.0 - alpha), "ratio"))
        uppers.append(((4.0 - alpha) / (2.0 - alpha), "ratio"))
        pw = (2.0 / alpha) ** (alpha / 2.0)
        lowers.append((pw * (2.0 - alpha) / 2.0, "power"))
        uppers.append((pw * 2.0 / (2.0 - alpha), "power"))
    if alpha > 1.0:
        lowers.append((1.0 / (2.0 * math.sqrt(2.0) * alpha), "linear"))
        uppers.append((2.0 * math.sqrt(2.0) * alpha, "linear"))
    if policy == CANONICAL:
        lo, lo_name = lowers[0]
        up, up_name = uppers[0]
    else:
        lo, lo_name = max(lowers)
        up, up_name = min(uppers)
    return BdgConstants(lo, up, (lo_name, up_name))


def multidim_bdg_constant(alpha: float, d: int, policy: Policy = CANONICAL) -> float:
    """Constant C(alpha, d) with E[(max_s ||B_s||)^a] <= C(a,d) E[tau^(a/2)].

    d^(1 + (a-1)^+) C_a in general; for a < 1 the minimum of that and the
    maximal-inequality route d^(a/2) a^(-a) / (1-a).
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    C_alpha = bdg_constants(alpha, policy).C_upper
    base = float(d) ** (1.0 + _pos_part(alpha - 1.0)) * C_alpha
    if alpha < 1.0:
        lenglart = float(d) ** (alpha / 2.0) * alpha ** (-alpha) / (1.0 - alpha)
        return min(lenglart, base)
    return base


def doob_factor(alpha: float) -> float:
    """Maximal-inequality prefactor ((a v 1) / |a - 1|)^(a v 1); a != 1."""
    if not (math.isfinite(alpha) and alpha > 0.0):
        raise ValueError(f"exponent must be > 0, got {alpha!r}")
    if alpha == 1.0:
        raise ValueError("the maximal-inequality prefactor diverges at exponent 1; use 1 - eps")
    m = max(alpha, 1.0)
    return (m / abs(alpha - 1.0)) ** m


def uniform_moment_constant(alpha: float, d: int, policy: Policy = CANONICAL) -> float:
    """Constant C1(alpha, d) in E[tau^a] <= C1(a,d) diam(D)^(2a).

    1/d^a for a <= 1; for a > 1 the Doob/moment route
    (1/c_a) ((a v 1)/|a-1|)^(a v 1) d^((a/2)(2/a - 1)^+ - 1).
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if not (math.isfinite(alpha) and alpha > 0.0):
        raise ValueError(f"exponent must be > 0, got {alpha!r}")
    if alpha <= 1.0:
        return 1.0 / float(d) ** alpha
    c_alpha = bdg_constants(alpha, policy).c_lower
    expo = (alpha / 2.0) * _pos_part(2.0 / alpha - 1.0) - 1.0
    return (1.0 / c_alpha) * doob_factor(alpha) * float(d) ** expo


def moment_switch_constant(alpha: float, d: int, policy: Policy = CANONICAL) -> float:
    """Constant c_{d,a} = (3^a / c_a) ((a v 1)/|a-1|)^(a v 1) d^((a/2)(2/a-1)^+ - 1).

    Prefactor of the local term in the dyadic decay iteration for exit-time
    moments; requires a != 1.
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    c_alpha = bdg_constants(alpha, policy).c_lower
    expo = (alpha / 2.0) * _pos_part(2.0 / alpha - 1.0) - 1.0
    return (3.0 ** alpha / c_alpha) * doob_factor(alpha) * float(d) ** expo


def source_constant(d: int, diam: float, gamma: float, q: float) -> float:
    """Constant C(d, D, gamma, q) multiplying ||f||_{L^gamma} (v_D)^{1/p}.

    Requires gamma > q and 2*gamma - q*d > 0 (otherwise the bound is vacuous).
    Scales as diam^((2*gamma - q*d) / (gamma*q)).
    """
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    if not (math.isfinite(diam) and diam > 0.0):
        raise ValueError(f"diameter must be > 0, got {diam!r}")
    if not (q >= 1.0 and math.isfinite(q)):
        raise ValueError(f"integrability exponent q must be >= 1, got {q!r}")
    if not (math.isfinite(gamma) and gamma > q):
        raise ValueError(f"requires gamma > q, got gamma={gamma!r} q={q!r}")
    if 2.0 * gamma - q * d <= 0.0:
        raise ValueError(
            f"vacuous source bound: 2*gamma - q*d = {2.0 * gamma - q * d} <= 0"
        )
    if gamma / q <= d / 2.0:
        raise ValueError(f"requires gamma/q > d/2, got gamma/q = {gamma / q}")
    diam_expo = (2.0 * gamma - q * d) / (gamma * q)
    if d == 2:
        return (
            diam ** (2.0 * (gamma - q) / (gamma * q))
            / (4.0 * math.pi) ** (1.0 / q)
            * gamma_fn(gamma / (gamma - q) + 1.0) ** ((gamma - q) / (gamma * q))
        )
    wd = unit_ball_volume(d)
    bracket = (
        (d - 2.0)
        * (gamma - q)
        / ((d * (d - 2.0) * wd) ** (q / (gamma - q)) * (2.0 * gamma - q * d))
    )
    return bracket ** ((gamma - q) / (gamma * q)) * diam ** diam_expo


def sphere_constant(
    alpha: float, d: int, R: float, r: float, policy: Policy = CANONICAL
) -> float:
    """Near-boundary constant C(alpha, d, R, r) for the exterior-sphere bound.

    C(a,d) e^a [4 / ((1-a) c_a) + ((R-r)/r)^(a/2) d^(a/2)] + 1, for a in (0,1)
    and 0 < r < R.
    """
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"exponent must lie in (0, 1), got {alpha!r}")
    if not (0.0 < r < R):
        raise ValueError(f"requires 0 < r < R, got r={r!r} R={R!r}")
    c_alpha = bdg_constants(alpha, policy).c_lower
    Cad = multidim_bdg_constant(alpha, d, policy)
    bracket = 4.0 / ((1.0 - alpha) * c_alpha) + ((R - r) / r) ** (alpha / 2.0) * float(
        d
    ) ** (alpha / 2.0)
    return Cad * math.exp(alpha) * bracket + 1.0


def tilde_omega(omega: float) -> float:
    """Cone-opening exponent pi / (2 (pi - omega)) for omega in [0, pi)."""
    if not (math.isfinite(omega) and 0.0 <= omega < math.pi):
        raise ValueError(f"cone angle must lie in [0, pi), got {omega!r}")
    return math.pi / (2.0 * (math.pi - omega))


def delta_omega_bound(omega: float, d: int) -> float:
    """Upper estimate for the cone-condition contraction factor delta_omega.

    Returns the tighter of the two closed-form displays
        1 - (3/8) (2/3)^(d-1) I_{sin(omega)^2}((d-1)/2, 1/2)
        1 - (3/4) (2/3)^(d-1) (1/(sqrt(pi)(d-1))) (d/2 - 3/4)^(1/2) sin(omega)^(d-1)
    for d >= 3 and omega in (0, pi/2].
    """
    if d < 3:
        raise ValueError(f"cone contraction estimate requires d >= 3, got {d}")
    if not (0.0 < omega <= math.pi / 2.0 + 1e-15):
        raise ValueError(f"cone angle must lie in (0, pi/2], got {omega!r}")
    omega = min(omega, math.pi / 2.0)
    from .specialfn import beta_inc_regularized, beta_inc_lower_bound

    s2 = math.sin(omega) ** 2
    scale = (2.0 / 3.0) ** (d - 1)
    b_beta = 1.0 - (3.0 / 8.0) * scale * beta_inc_regularized(s2, (d - 1) / 2.0, 0.5)
    b_closed = 1.0 - (3.0 / 8.0) * scale * beta_inc_lower_bound(s2, d)
    return min(b_beta, b_closed)


def newtonian_constant(d: int) -> float:
    """Kernel constant gamma_d = Gamma(d/2 - 1) / (4 pi)^(d/2), d >= 3."""
    if d < 3:
        raise ValueError(f"the kernel constant requires d >= 3, got {d}")
    return gamma_fn(d / 2.0 - 1.0) / (4.0 * math.pi) ** (d / 2.0)


def green_holder_constant(alpha: float, d: int) -> float:
    """gamma_{d,alpha} = gamma_d (1 - a/(d-2+a))^(2-d-a) (2(d-2)/a)^a."""
    if d < 3:
        raise ValueError(f"requires d >= 3, got {d}")
    if not (0.0 < alpha <= 1.0):
        raise ValueError(f"exponent must lie in (0, 1], got {alpha!r}")
    g = newtonian_constant(d)
    return (
        g
        * (1.0 - alpha / (d - 2.0 + alpha)) ** (2.0 - d - alpha)
        * (2.0 * (d - 2.0) / alpha) ** alpha
    )


def cone_vertex_constant(alpha: float, r: float, policy: Policy = CANONICAL) -> float:
    """Constant C2(alpha, r) of the separating-hyperplane exit-moment bound.

    ((a v 1)/|a-1|)^(a v 1) 2^((a-1)^+) / c_a * (2r)^a (1 + (2r)^((a-1)^+));
    requires a != 1.
    """
    if not (math.isfinite(r) and r > 0.0):
        raise ValueError(f"radius must be > 0, got {r!r}")
    c_alpha = bdg_constants(alpha, policy).c_lower
    ap = _pos_part(alpha - 1.0)
    return (
        doob_factor(alpha)
        * 2.0 ** ap
        / c_alpha
        * (2.0 * r) ** alpha
        * (1.0 + (2.0 * r) ** ap)
    )


def reverse_doubling_pair(
    alpha: float,
    d: int,
    delta: float,
    r0: float,
    diam: float,
    policy: Policy = CANONICAL,
) -> tuple[float, float, float, float]:
    """Constants (C1, C2, Ctilde1, Ctilde2) of the dyadic-decay route.

    Ctilde1 = c r0^a / (1 - 2^a delta) when delta < 2^-a else 0;
    Ctilde2 = diam^(2a)/(delta d^a), plus c r0^a / (2^a delta - 1) when
    delta > 2^-a.  C1 = 2^((a-1)^+) [C(a,d) Ctilde1 + 1];
    C2 = 2^((a-1)^+) C(a,d) Ctilde2.  The log case delta == 2^-a has no
    finite constant pair; callers handle it separately.
    """
    if not (0.0 < delta < 1.0):
        raise ValueError(f"contraction factor must lie in (0, 1), got {delta!r}")
    c = moment_switch_constant(alpha, d, policy)
    two_a = 2.0 ** alpha
    if delta * two_a == 1.0:
        raise ValueError("logarithmic case delta == 2^-alpha has no constant pair")
    if delta < 1.0 / two_a:
        ct1 = c * r0 ** alpha / (1.0 - two_a * delta)
        ct2 = diam ** (2.0 * alpha) / (delta * float(d) ** alpha)
    else:
        ct1 = 0.0
        ct2 = c * r0 ** alpha / (two_a * delta - 1.0) + diam ** (2.0 * alpha) / (
            delta * float(d) ** alpha
        )
    Cad = multidim_bdg_constant(alpha, d, policy)
    ap = 2.0 ** _pos_part(alpha - 1.0)
    return ap * (Cad * ct1 + 1.0), ap * Cad * ct2, ct1, ct2


@dataclass(frozen=True)
class ConstantTable:
    """Flat name -> value table of every constant applicable to one setup."""

    entries: dict[str, float]
    policy: Policy

    def __getitem__(self, key: str) -> float:
        return self.entries[key]

    def __contains__(self, key: str) -> bool:
        return key in self.entries

    def as_json_dict(self) -> dict[str, object]:
        out: dict[str, object] = dict(sorted(self.entries.items()))
        out["policy"] = self.policy
        return out


def derived_constants(
    domain,
    alpha: float,
    policy: Policy = CANONICAL,
    gamma: float | None = None,
    q: float | None = None,
) -> ConstantTable:
    """Evaluate every constant applicable to (domain, alpha, policy).

    Inapplicable entries are absent from the table, never zero.  gamma/q feed
    the source-term constant when both are given and finite.
    """
    from . import geometry

    _check_policy(policy)
    if alpha == 1.0:
        raise ValueError(
            "alpha = 1 is rejected (0 < alpha != 1): the moment-switch and "
            "vertex constants divide by |alpha - 1|; use alpha = 1 - eps"
        )
    d = domain.d
    diam = domain.diameter()
    e: dict[str, float] = {}
    pair = bdg_constants(alpha, policy)
    e["c_alpha"] = pair.c_lower
    e["C_alpha"] = pair.C_upper
    e["C_alpha_d"] = multidim_bdg_constant(alpha, d, policy)
    e["C1_alpha_d"] = uniform_moment_constant(alpha, d, policy)
    e["C1_half_alpha_d"] = uniform_moment_constant(alpha / 2.0, d, policy)
    e["doob_factor"] = doob_factor(alpha)
    e["c_d_alpha"] = moment_switch_constant(alpha, d, policy)
    e["c_d_2"] = moment_switch_constant(2.0, d, policy)
    if gamma is not None and q is not None and math.isfinite(gamma):
        e["C_f"] = source_constant(d, diam, gamma, q)
    if d >= 3:
        e["gamma_d"] = newtonian_constant(d)
        if 0.0 < alpha <= 1.0:
            e["gamma_d_alpha"] = green_holder_constant(alpha, d)

    if isinstance(domain, geometry.Annulus):
        if 0.0 < alpha < 1.0:
            e["C_alpha_d_R_r"] = sphere_constant(alpha, d, domain.R, domain.r, policy)

    if isinstance(domain, geometry.BallMinusCone) and d == 2:
        tw = tilde_omega(domain.omega)
        e["tilde_omega"] = tw
        C2c = cone_vertex_constant(alpha, domain.r, policy)
        e["C2"] = C2c
        e["C3"] = 2.0 * C2c * tw ** alpha
        e["C4"] = (
            uniform_moment_constant(alpha / 2.0, 2, policy)
            * (diam + domain.r) ** alpha
            * tw
        )
        if 0.0 < alpha < 1.0:
            c_a = pair.c_lower
            e["C5"] = (
                multidim_bdg_constant(alpha, 2, policy)
                * tw ** alpha
                * 8.0
                * domain.r ** alpha
                / ((1.0 - alpha) * c_a)
            )
            e["C6"] = (
                multidim_bdg_constant(alpha, 2, policy)
                * (diam + domain.r) ** alpha
                * tw
                / 2.0 ** (alpha / 2.0)
            )
        # source-term variant: the cone constants evaluated at exponent 2
        C2_2 = cone_vertex_constant(2.0, domain.r, policy)
        C3_2 = 2.0 * C2_2 * tw ** 2
        C4_2 = uniform_moment_constant(1.0, 2, policy) * (diam + domain.r) ** 2 * tw
        e["C7"] = C3_2 + C4_2

    if isinstance(domain, geometry.BallMinusCone) and d >= 3:
        dw = delta_omega_bound(domain.omega, d)
        e["delta_omega"] = dw
        if dw != 2.0 ** (-alpha):
            C1, C2r, ct1, ct2 = reverse_doubling_pair(alpha, d, dw, domain.r, diam, policy)
            e["C1"] = C1
            e["C2"] = C2r
            e["Ctilde1"] = ct1
            e["Ctilde2"] = ct2

    if isinstance(domain, geometry.CylinderMinusWedge):
        tw = tilde_omega(domain.omega)
        e["tilde_omega"] = tw
        C2c = cone_vertex_constant(alpha, domain.r, policy)
        e["C2"] = C2c
        e["C3"] = 2.0 * C2c * tw ** alpha
        e["C8"] = (
            uniform_moment_constant(alpha / 2.0, 3, policy)
            * (diam + domain.r + domain.l) ** alpha
            * tw
        )
        e["C9"] = multidim_bdg_constant(alpha, 3, policy) * e["C3"]
        e["C10"] = multidim_bdg_constant(alpha, 3, policy) * e["C8"]
        C2_2 = cone_vertex_constant(2.0, domain.r, policy)
        C3_2 = 2.0 * C2_2 * tw ** 2
        C8_2 = (
            uniform_moment_constant(1.0, 3, policy)
            * (diam + domain.r + domain.l) ** 2
            * tw
        )
        e["C11"] = C3_2 + C8_2
        if gamma is not None and q is not None and math.isfinite(gamma):
            p = q / (q - 1.0) if q > 1.0 else math.inf
            if math.isfinite(p):
                e["C12"] = source_constant(3, diam, gamma, q) * e["C11"] ** (1.0 / p)

    return ConstantTable(entries=e, policy=policy)
