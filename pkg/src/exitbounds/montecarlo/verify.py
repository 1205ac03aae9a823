"""Certificate verification: lower bound <= Monte Carlo estimate <= upper bound.

For every point of a grid the orchestrator evaluates the analytic lower and
upper certificates for the exit-time moment (and, where a boundary
decomposition exists, for the harmonic-measure decay), runs the matching
Monte Carlo estimator, and records a verdict with 3-standard-error slack.
Regime errors ("bound not claimed here") become explicit rows, never silent
passes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import bounds, geometry
from ..constants import CANONICAL
from .engine import McEstimate, PathParams, estimate_h, estimate_v_alpha

__all__ = ["VerdictRow", "VerdictTable", "verify_certificates", "SLACK_SE"]

SLACK_SE = 3.0

PASS = "pass"
FAIL = "fail"
NOT_CLAIMED = "not_claimed"


@dataclass(frozen=True)
class VerdictRow:
    domain: str
    point: tuple[float, ...]
    alpha: float
    quantity: str
    lower: float | None
    mc_mean: float | None
    mc_se: float | None
    upper: float | None
    status: str
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def as_json_dict(self) -> dict[str, object]:
        return {
            "domain": self.domain,
            "point": list(self.point),
            "alpha": self.alpha,
            "quantity": self.quantity,
            "lower": self.lower,
            "mc_mean": self.mc_mean,
            "mc_se": self.mc_se,
            "upper": self.upper,
            "status": self.status,
            "note": self.note,
        }


@dataclass
class VerdictTable:
    rows: list[VerdictRow] = field(default_factory=list)

    @property
    def n_failed(self) -> int:
        return sum(1 for r in self.rows if r.status == FAIL)

    def all_pass(self) -> bool:
        return self.n_failed == 0

    def summary(self) -> str:
        n = len(self.rows)
        return f"{n - self.n_failed}/{n} verdicts pass"


def _verdict(lower, est: McEstimate, upper, domain, point, alpha, quantity, note="") -> VerdictRow:
    ok = True
    if lower is not None and not (lower <= est.mean + SLACK_SE * est.std_error):
        ok = False
    if upper is not None and not (est.mean <= upper + SLACK_SE * est.std_error):
        ok = False
    return VerdictRow(
        domain=domain,
        point=tuple(float(v) for v in np.atleast_1d(point)),
        alpha=alpha,
        quantity=quantity,
        lower=lower,
        mc_mean=est.mean,
        mc_se=est.std_error,
        upper=upper,
        status=PASS if ok else FAIL,
        note=note or "; ".join(est.warnings),
    )


def _not_claimed(domain, point, alpha, quantity, est: McEstimate | None, why: str) -> VerdictRow:
    return VerdictRow(
        domain=domain,
        point=tuple(float(v) for v in np.atleast_1d(point)),
        alpha=alpha,
        quantity=quantity,
        lower=None,
        mc_mean=None if est is None else est.mean,
        mc_se=None if est is None else est.std_error,
        upper=None,
        status=NOT_CLAIMED,
        note=why,
    )


def _upper_v_certificate(condition: str, domain, x, alpha: float, policy: str):
    if condition == "sphere":
        return bounds.bound_v_annulus(domain, x, alpha, policy)
    if condition == "cone2d":
        return bounds.bound_v_cone2d(
            domain.omega, domain.r, domain.diameter(), x, alpha, policy, d=2
        )
    if condition == "wedge3d":
        return bounds.bound_v_wedge3d(
            domain.omega, domain.r, domain.l, domain.diameter(), x, alpha, policy
        )
    if condition == "coneHD":
        _, v = bounds.bound_vh_reverse_doubling(domain, x, alpha, policy=policy)
        return v
    raise ValueError(f"unknown condition {condition!r}")


def _upper_h_certificate(condition: str, domain, x, policy: str):
    if condition == "cone2d":
        return bounds.bound_h_cone2d(domain.omega, domain.r, x)
    if condition == "wedge3d":
        s1 = float(np.hypot(x[0], x[1]))
        return bounds.bound_h_cone2d(domain.omega, domain.r, s1)
    if condition == "coneHD":
        # the decay certificate for h does not depend on the moment exponent
        h, _ = bounds.bound_vh_reverse_doubling(domain, x, 0.5, policy=policy)
        return h
    return None


def verify_certificates(
    domain,
    condition: str,
    points,
    alpha: float,
    n_paths: int,
    seed: int = 0,
    params: PathParams | None = None,
    policy: str = CANONICAL,
    check_h: bool | None = None,
) -> VerdictTable:
    """Sandwich check at every grid point: lower <= MC <= upper, 3 SE slack.

    The Monte Carlo estimate targets the alpha/2 exit-time moment (matching
    the upper certificates); harmonic-measure rows are added for the cone
    and wedge conditions unless check_h=False.
    """
    table = VerdictTable()
    dom_name = type(domain).__name__
    if check_h is None:
        check_h = condition in ("cone2d", "wedge3d", "coneHD")
    pts = [np.asarray(p, dtype=np.float64) for p in points]
    for j, x in enumerate(pts):
        # exit-moment sandwich
        est = estimate_v_alpha(domain, x, alpha / 2.0, n_paths, params, seed, substream=2 * j)
        lower = bounds.lower_bound_v(domain, x, alpha / 2.0, policy).value
        try:
            upper_cert = _upper_v_certificate(condition, domain, x, alpha, policy)
            table.rows.append(
                _verdict(lower, est, upper_cert.value, dom_name, x, alpha, "v_moment", upper_cert.regime)
            )
        except bounds.RegimeError as err:
            table.rows.append(_not_claimed(dom_name, x, alpha, "v_moment", est, str(err)))

        if check_h:
            h_est = estimate_h(
                domain, geometry.DECOMP_OBSTACLE, x, n_paths, params, seed, substream=2 * j + 1
            )
            try:
                h_cert = _upper_h_certificate(condition, domain, x, policy)
                upper = None if h_cert is None else h_cert.value
                note = "" if h_cert is None else h_cert.regime
                table.rows.append(
                    _verdict(0.0, h_est, upper, dom_name, x, alpha, "h", note)
                )
            except bounds.RegimeError as err:
                table.rows.append(_not_claimed(dom_name, x, alpha, "h", h_est, str(err)))
    return table
