"""Batch front end: parse a JSON run config, evaluate constants and
certificates, optionally run the Monte Carlo verifier, and emit reports.

Output files (in --out): constants.json, certificates.csv, verdicts.csv,
run-meta.json.  Outputs are deterministic for a fixed config (including the
seed); every float is printed with 17 significant digits so independent
implementations can be compared byte for byte.  The exit code is 0 iff no
verdict failed and the config validated cleanly.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, bounds, constants as cst, geometry
from ._kernels import name as backend_name
from .montecarlo import PathParams, estimate_h, estimate_v_alpha, verify_certificates

SCHEMA_VERSION = 1

__all__ = ["RunConfig", "ConfigError", "validate_config", "run", "main"]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


class ConfigError(ValueError):
    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("invalid config:\n" + "\n".join(f"  - {p}" for p in problems))


@dataclass(frozen=True)
class RunConfig:
    mode: str
    domain: geometry.DomainSpec
    condition: str | None
    alpha: float
    gamma: float
    q: float
    g_seminorm: float
    g_sup_gap: float
    f_norm: float
    f_norm_kind: str
    points: tuple[tuple[float, ...], ...]
    paths: int
    seed: int
    policy: str
    out_dir: str
    out_format: str
    mc: PathParams = field(default_factory=PathParams)

    def holder_params(self) -> bounds.HolderParams:
        return bounds.HolderParams(alpha=self.alpha, gamma=self.gamma, q=self.q)

    def data_spec(self) -> bounds.DataSpec:
        return bounds.DataSpec(
            g_seminorm=self.g_seminorm,
            g_sup_gap=self.g_sup_gap,
            f_norm=self.f_norm,
            f_norm_kind=self.f_norm_kind,
        )

    def to_json_dict(self) -> dict:
        mc = {
            "paths": self.paths,
            "seed": self.seed,
            "dt_base": self.mc.dt_base,
            "shell_eps": self.mc.shell_eps,
            "wos_eps": self.mc.wos_eps,
            "dt_policy": self.mc.dt_policy,
            "kappa": self.mc.kappa,
            "max_steps": self.mc.max_steps,
        }
        return {
            "schema": SCHEMA_VERSION,
            "mode": self.mode,
            "domain": self.domain.to_dict(),
            "condition": self.condition,
            "params": {
                "alpha": self.alpha,
                "gamma": "inf" if math.isinf(self.gamma) else self.gamma,
                "q": self.q,
            },
            "data": {
                "g_seminorm": self.g_seminorm,
                "g_sup_gap": self.g_sup_gap,
                "f_norm": self.f_norm,
                "f_norm_kind": self.f_norm_kind,
            },
            "points": [list(p) for p in self.points],
            "mc": mc,
            "policy": self.policy,
            "out": {"dir": self.out_dir, "format": self.out_format},
        }


_KNOWN_TOP_KEYS = {
    "schema", "mode", "domain", "condition", "params", "data", "points", "mc", "policy", "out",
}

def _infer_condition(domain) -> str | None:
    if isinstance(domain, geometry.Annulus):
        return "sphere"
    if isinstance(domain, geometry.BallMinusCone):
        return "cone2d" if domain.d == 2 else "coneHD"
    if isinstance(domain, geometry.CylinderMinusWedge):
        return "wedge3d"
    return None


def validate_config(doc: dict) -> RunConfig:
    """Resolve a raw config document into a RunConfig, applying defaults.

    All problems are collected and reported together.
    """
    problems: list[str] = []
    unknown = set(doc) - _KNOWN_TOP_KEYS
    if unknown:
        problems.append(f"unknown top-level keys: {sorted(unknown)}")
    nested_known = {
        "params": {"alpha", "gamma", "q"},
        "data": {"g_seminorm", "g_sup_gap", "f_norm", "f_norm_kind"},
        "mc": {"paths", "seed", "dt_base", "shell_eps", "wos_eps", "dt_policy", "kappa", "max_steps"},
        "out": {"dir", "format"},
    }
    for section, known in nested_known.items():
        sec = doc.get(section, {})
        if isinstance(sec, dict):
            bad = set(sec) - known
            if bad:
                problems.append(f"unknown keys in {section}: {sorted(bad)}")
    if doc.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
        problems.append(f"unsupported schema version {doc.get('schema')!r}")
    mode = doc.get("mode", "certify")
    if mode not in ("certify", "simulate", "verify"):
        problems.append(f"mode must be certify|simulate|verify, got {mode!r}")

    domain = None
    try:
        domain = geometry.domain_from_dict(doc.get("domain", {}))
    except (KeyError, TypeError, geometry.GeometryError) as err:
        problems.append(f"domain: {err}")

    params = doc.get("params", {})
    alpha = params.get("alpha", 0.5)
    gamma_raw = params.get("gamma", "inf")
    gamma = math.inf if gamma_raw in ("inf", None) else float(gamma_raw)
    q = float(params.get("q", 2.0))
    if not (isinstance(alpha, (int, float)) and 0.0 < alpha):
        problems.append(f"params.alpha must be a positive real, got {alpha!r}")
    elif alpha == 1.0:
        problems.append("params.alpha: hypothesis 0 < alpha != 1 violated (alpha = 1)")
    if domain is not None and math.isfinite(gamma):
        if 2.0 * gamma - q * domain.d <= 0.0:
            problems.append(
                f"params: vacuous source bound, 2*gamma - q*d = {2.0 * gamma - q * domain.d:g} <= 0"
            )
        elif gamma <= q:
            problems.append(f"params: needs gamma > q, got gamma={gamma} q={q}")

    data = doc.get("data", {})
    g_seminorm = float(data.get("g_seminorm", 0.0))
    g_sup_gap = float(data.get("g_sup_gap", 0.0))
    f_norm = float(data.get("f_norm", 0.0))
    f_norm_kind = data.get("f_norm_kind", "inf" if math.isinf(gamma) else "gamma")
    for nm, v in (("g_seminorm", g_seminorm), ("g_sup_gap", g_sup_gap), ("f_norm", f_norm)):
        if v < 0.0 or not math.isfinite(v):
            problems.append(f"data.{nm} must be a nonnegative real, got {v!r}")
    if f_norm_kind not in ("inf", "gamma"):
        problems.append(f"data.f_norm_kind must be inf|gamma, got {f_norm_kind!r}")

    raw_points = doc.get("points", [])
    points: list[tuple[float, ...]] = []
    try:
        if isinstance(raw_points, dict):
            ray = np.asarray(raw_points["ray"], dtype=np.float64)
            for s in raw_points["norms"]:
                points.append(tuple(float(v) for v in s * ray))
        else:
            for p in raw_points:
                points.append(tuple(float(v) for v in p))
    except (KeyError, TypeError, ValueError) as err:
        problems.append(f"points: {err}")
    if domain is not None:
        for p in points:
            if len(p) != domain.d:
                problems.append(f"points: {list(p)} has dimension {len(p)}, domain is {domain.d}d")
                break
            if not domain.contains(np.asarray(p)):
                problems.append(f"points: {list(p)} is not inside the domain")

    mc_doc = doc.get("mc", {})
    paths = int(mc_doc.get("paths", 10_000))
    seed = int(mc_doc.get("seed", 0))
    if paths < 0:
        problems.append(f"mc.paths must be >= 0, got {paths}")
    if not (0 <= seed < 2 ** 64):
        problems.append(f"mc.seed must be a u64, got {seed}")
    try:
        mc = PathParams(
            dt_base=mc_doc.get("dt_base"),
            shell_eps=mc_doc.get("shell_eps"),
            dt_policy=mc_doc.get("dt_policy", "boundary_adaptive"),
            kappa=float(mc_doc.get("kappa", 0.1)),
            max_steps=int(mc_doc.get("max_steps", 1_000_000)),
            wos_eps=mc_doc.get("wos_eps"),
        )
    except ValueError as err:
        problems.append(f"mc: {err}")
        mc = PathParams()

    policy = doc.get("policy", cst.CANONICAL)
    if policy not in (cst.CANONICAL, cst.BEST):
        problems.append(f"policy must be canonical|best, got {policy!r}")

    out = doc.get("out", {})
    out_dir = out.get("dir", ".")
    out_format = out.get("format", "csv")
    if out_format not in ("csv", "json"):
        problems.append(f"out.format must be csv|json, got {out_format!r}")

    condition = doc.get("condition")
    if domain is not None:
        inferred = _infer_condition(domain)
        if condition is None:
            condition = inferred
        elif inferred is not None and condition != inferred:
            problems.append(
                f"condition {condition!r} does not match the domain (expected {inferred!r})"
            )
        if mode == "verify" and condition is None:
            problems.append(
                "verify mode needs a domain with a boundary condition "
                "(annulus, ball_minus_cone or cylinder_minus_wedge); a plain "
                "ball has no certificates to check — use simulate"
            )

    if problems:
        raise ConfigError(problems)
    return RunConfig(
        mode=mode,
        domain=domain,
        condition=condition,
        alpha=float(alpha),
        gamma=gamma,
        q=q,
        g_seminorm=g_seminorm,
        g_sup_gap=g_sup_gap,
        f_norm=f_norm,
        f_norm_kind=f_norm_kind,
        points=tuple(points),
        paths=paths,
        seed=seed,
        policy=policy,
        out_dir=out_dir,
        out_format=out_format,
        mc=mc,
    )


def _certificates_for_point(cfg: RunConfig, x) -> list[dict]:
    rows: list[dict] = []
    dom = cfg.domain
    hp = cfg.holder_params()
    ds = cfg.data_spec()

    def add(quantity: str, fn):
        try:
            cert = fn()
        except bounds.RegimeError as err:
            rows.append(
                {
                    "point": x,
                    "quantity": quantity,
                    "theorem": "",
                    "regime": "not_claimed",
                    "value": None,
                    "raw_value": None,
                    "cap": None,
                    "valid": False,
                    "note": str(err),
                    "constants": {},
                }
            )
            return
        except ValueError as err:
            rows.append(
                {
                    "point": x,
                    "quantity": quantity,
                    "theorem": "",
                    "regime": "inapplicable",
                    "value": None,
                    "raw_value": None,
                    "cap": None,
                    "valid": False,
                    "note": str(err),
                    "constants": {},
                }
            )
            return
        d = cert.as_json_dict()
        d["quantity"] = quantity
        d["point"] = x
        d["note"] = ""
        rows.append(d)

    add("v_lower", lambda: bounds.lower_bound_v(dom, x, cfg.alpha / 2.0, cfg.policy))
    if cfg.condition == "sphere":
        add("v_upper", lambda: bounds.bound_v_annulus(dom, x, cfg.alpha, cfg.policy))
    elif cfg.condition == "cone2d":
        add(
            "v_upper",
            lambda: bounds.bound_v_cone2d(dom.omega, dom.r, dom.diameter(), x, cfg.alpha, cfg.policy),
        )
        add("h_upper", lambda: bounds.bound_h_cone2d(dom.omega, dom.r, x))
    elif cfg.condition == "wedge3d":
        add(
            "v_upper",
            lambda: bounds.bound_v_wedge3d(dom.omega, dom.r, dom.l, dom.diameter(), x, cfg.alpha, cfg.policy),
        )
        add("h_upper", lambda: bounds.bound_h_cone2d(dom.omega, dom.r, float(np.hypot(x[0], x[1]))))
    elif cfg.condition == "coneHD":
        def both():
            return bounds.bound_vh_reverse_doubling(dom, x, cfg.alpha, policy=cfg.policy)
        add("v_upper", lambda: both()[1])
        add("h_upper", lambda: both()[0])
    if cfg.condition is not None and cfg.g_seminorm > 0.0:
        add("ug_upper", lambda: bounds.bound_ug(cfg.condition, dom, x, hp, ds, cfg.policy))
    if cfg.condition is not None and cfg.f_norm > 0.0:
        add("uf_upper", lambda: bounds.bound_uf(cfg.condition, dom, x, hp, ds, cfg.policy))
    return rows


def _write_constants(cfg: RunConfig, out: Path) -> None:
    table = cst.derived_constants(
        cfg.domain,
        cfg.alpha,
        cfg.policy,
        gamma=None if math.isinf(cfg.gamma) else cfg.gamma,
        q=cfg.q,
    )
    with open(out / "constants.json", "w") as fh:
        json.dump(table.as_json_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


_CERT_COLUMNS = [
    "point", "quantity", "theorem", "regime", "value", "raw_value", "cap", "valid", "note", "constants",
]


def _write_certificates(cfg: RunConfig, out: Path) -> None:
    rows = []
    for p in cfg.points:
        rows.extend(_certificates_for_point(cfg, np.asarray(p)))
    if cfg.out_format == "json":
        payload = []
        for r in rows:
            r = dict(r)
            r["point"] = [float(v) for v in np.atleast_1d(r["point"])]
            payload.append(r)
        with open(out / "certificates.csv", "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return
    with open(out / "certificates.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(_CERT_COLUMNS)
        for r in rows:
            point = ";".join(_fmt(float(v)) for v in np.atleast_1d(r["point"]))
            consts = ";".join(f"{k}={_fmt(v)}" for k, v in sorted(r["constants"].items()))
            w.writerow(
                [
                    point,
                    r["quantity"],
                    r["theorem"],
                    r["regime"],
                    _fmt(r["value"]),
                    _fmt(r["raw_value"]),
                    _fmt(r["cap"]),
                    _fmt(r["valid"]),
                    r.get("note", ""),
                    consts,
                ]
            )


_VERDICT_COLUMNS = [
    "domain", "point", "alpha", "lower", "mc_mean", "mc_se", "upper", "pass",
    "quantity", "status", "note",
]


def _write_verdicts(rows: list, out: Path, fmt: str) -> None:
    if fmt == "json":
        with open(out / "verdicts.csv", "w") as fh:
            json.dump([r.as_json_dict() for r in rows], fh, indent=2, sort_keys=True)
            fh.write("\n")
        return
    with open(out / "verdicts.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(_VERDICT_COLUMNS)
        for r in rows:
            w.writerow(
                [
                    r.domain,
                    ";".join(_fmt(v) for v in r.point),
                    _fmt(r.alpha),
                    _fmt(r.lower),
                    _fmt(r.mc_mean),
                    _fmt(r.mc_se),
                    _fmt(r.upper),
                    _fmt(r.passed),
                    r.quantity,
                    r.status,
                    r.note,
                ]
            )


def run(cfg: RunConfig) -> int:
    """Execute a validated config; returns the process exit code."""
    t0 = time.perf_counter()
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    _write_constants(cfg, out)
    _write_certificates(cfg, out)

    verdict_rows: list = []
    n_failed = 0
    censor_note = ""
    if cfg.mode == "verify" and cfg.paths > 0:
        table = verify_certificates(
            cfg.domain,
            cfg.condition,
            [np.asarray(p) for p in cfg.points],
            cfg.alpha,
            cfg.paths,
            seed=cfg.seed,
            params=cfg.mc,
            policy=cfg.policy,
        )
        verdict_rows = table.rows
        n_failed = table.n_failed
    elif cfg.mode == "simulate" and cfg.paths > 0:
        from .montecarlo.verify import VerdictRow

        for j, p in enumerate(cfg.points):
            x = np.asarray(p)
            est = estimate_v_alpha(cfg.domain, x, cfg.alpha / 2.0, cfg.paths, cfg.mc, cfg.seed, substream=2 * j)
            verdict_rows.append(
                VerdictRow(
                    domain=type(cfg.domain).__name__,
                    point=tuple(p),
                    alpha=cfg.alpha,
                    quantity="v_moment",
                    lower=None,
                    mc_mean=est.mean,
                    mc_se=est.std_error,
                    upper=None,
                    status="estimate",
                    note="; ".join(est.warnings),
                )
            )
            if cfg.condition in ("cone2d", "wedge3d", "coneHD"):
                h_est = estimate_h(
                    cfg.domain, geometry.DECOMP_OBSTACLE, x, cfg.paths, cfg.mc, cfg.seed, substream=2 * j + 1
                )
                verdict_rows.append(
                    VerdictRow(
                        domain=type(cfg.domain).__name__,
                        point=tuple(p),
                        alpha=cfg.alpha,
                        quantity="h",
                        lower=None,
                        mc_mean=h_est.mean,
                        mc_se=h_est.std_error,
                        upper=None,
                        status="estimate",
                        note="; ".join(h_est.warnings),
                    )
                )
    _write_verdicts(verdict_rows, out, cfg.out_format)

    meta = {
        "schema": SCHEMA_VERSION,
        "version": __version__,
        "backend": backend_name,
        "config": cfg.to_json_dict(),
        "n_verdicts": len(verdict_rows),
        "n_failed": n_failed,
        "censoring": censor_note,
        "wall_clock_s": time.perf_counter() - t0,
    }
    with open(out / "run-meta.json", "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return 0 if n_failed == 0 else 1


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="exitbounds",
        description="Evaluate boundary-regularity certificates and verify them by Monte Carlo.",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for name, desc in (
        ("certify", "evaluate constants and certificates only"),
        ("simulate", "run Monte Carlo estimates only"),
        ("verify", "run the full lower <= MC <= upper check"),
    ):
        sp = sub.add_parser(name, help=desc)
        sp.add_argument("--config", required=True, help="path to the JSON run config")
        sp.add_argument("--out", default=None, help="output directory (overrides config)")
        sp.add_argument("--seed", type=int, default=None, help="RNG seed (overrides config)")
        sp.add_argument("--paths", type=int, default=None, help="Monte Carlo paths (overrides config)")
        sp.add_argument("--policy", choices=[cst.CANONICAL, cst.BEST], default=None)
        sp.add_argument("--format", choices=["csv", "json"], default=None)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        with open(args.config) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        print(f"error: cannot read config: {err}", file=sys.stderr)
        return 2
    doc["mode"] = args.command
    if args.out is not None:
        doc.setdefault("out", {})["dir"] = args.out
    if args.seed is not None:
        doc.setdefault("mc", {})["seed"] = args.seed
    if args.paths is not None:
        doc.setdefault("mc", {})["paths"] = args.paths
    if args.policy is not None:
        doc["policy"] = args.policy
    if args.format is not None:
        doc.setdefault("out", {})["format"] = args.format
    try:
        cfg = validate_config(doc)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    code = run(cfg)
    print(f"exitbounds {cfg.mode}: outputs in {cfg.out_dir} (exit {code})")
    return code


if __name__ == "__main__":
    sys.exit(main())
