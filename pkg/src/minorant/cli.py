"""Command line entry point.

Exit codes: 0 ok, 2 invalid input, 3 numeric failure, 4 certification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .bounds import DiscProblem, power_content_budget
from .core import Gauge
from .errors import DivergenceError, DomainError, NumericFailure, ValidationError
from .harnack import (
    ball_center_distance,
    ball_pair_upper,
    poisson_center_distance,
    poisson_disc_distance,
)
from .harness import GridSpec, make_log_poly, random_family, ray_series, run_verification
from .hcontent import content_upper

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_CERTIFY = 4

FLOAT_FMT = "%.16e"


def load_schema() -> dict:
    text = resources.files("minorant").joinpath("schema/config.schema.json").read_text("utf-8")
    return json.loads(text)


def validate_config(config) -> None:
    validator = jsonschema.Draft202012Validator(load_schema())
    errors = sorted(validator.iter_errors(config), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = ".".join(str(p) for p in err.absolute_path) or "config"
        if err.validator == "additionalProperties":
            # name the unknown key itself
            extra = sorted(set(err.instance) - set(err.schema.get("properties", {})))
            path = ".".join([p for p in [path if path != "config" else ""] + extra[:1] if p])
        raise ValidationError(path, err.message)


def _point(text, field, dim=None):
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise ValidationError(field, f"cannot parse point {text!r}") from None
    if dim is not None and len(vals) != dim:
        raise ValidationError(field, f"expected {dim} coordinates, got {len(vals)}")
    return vals


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([FLOAT_FMT % v if isinstance(v, float) else v for v in row])


def cmd_harnack(args) -> dict:
    d, r = args.d, args.r
    x = _point(args.x, "x", d)
    y = _point(args.y, "y", d) if args.y else (0.0,) * d
    rx, ry = math.hypot(*x), math.hypot(*y)
    if rx >= r:
        raise ValidationError("x", "x outside ball")
    if ry >= r:
        raise ValidationError("y", "y outside ball")
    out = {"d": d, "r": r, "x": list(x), "y": list(y)}
    triangle = ball_pair_upper(d, r, x, y)
    out["triangle_upper"] = triangle.value
    closed = None
    if ry == 0 or rx == 0:
        closed = ball_center_distance(d, r, max(rx, ry)).value
    out["closed_form"] = closed
    oracle = None
    if d == 2:
        # homothety to the unit disc
        oracle = poisson_disc_distance(complex(*x) / r, complex(*y) / r, args.tolerance).value
    elif ry == 0 or rx == 0:
        oracle = poisson_center_distance(d, r, max(rx, ry), args.tolerance).value
    out["poisson_oracle"] = oracle
    if closed is not None and oracle is not None:
        out["agreement_delta"] = abs(oracle - closed)
    return out


def _gauge_from(cfg) -> Gauge:
    kind = cfg["kind"]
    if kind == "power":
        if "p" not in cfg:
            raise ValidationError("gauge.p", "power gauge needs a degree p")
        return Gauge.power(cfg["p"], cfg.get("B", 1.0))
    if "ts" not in cfg or "hs" not in cfg:
        raise ValidationError("gauge.table", "tabulated gauge needs ts and hs")
    return Gauge.tabulated(cfg["ts"], cfg["hs"])


def cmd_certify(args) -> int:
    try:
        config = json.loads(Path(args.config).read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError("config", f"cannot read config: {exc}") from None
    validate_config(config)
    if args.seed is not None:
        config["seed"] = args.seed
    tolerance = args.tolerance if args.tolerance is not None else config.get("tolerance", 1e-9)
    gauge = _gauge_from(config["gauge"])
    pc = config["problem"]
    prob = DiscProblem(pc["R"], pc["s0"], pc["r"], gauge)
    if "zeros" in config:
        sample = make_log_poly(config["zeros"])
    elif "seed" in config:
        sample = random_family(config["seed"], 1)[0]
    else:
        raise ValidationError("zeros", "give a zero list or a seed")
    grid = GridSpec(**config.get("grid", {}))
    out_dir = Path(args.out or config.get("out") or ".")
    out_dir.mkdir(parents=True, exist_ok=True)

    rep = run_verification(sample, prob, grid, tolerance=tolerance)
    cert = rep.certificate
    cert_dict = cert.as_dict()
    if gauge.kind == "power" and gauge.B > 0:
        cert_dict["power_content_budget"] = power_content_budget(rep.problem)

    rays = ray_series(sample, np.linspace(0, 2 * np.pi, 8, endpoint=False), prob.R)
    _write_csv(out_dir / "rays.csv", ["angle", "t", "u"], rays)
    _write_csv(out_dir / "bounds.csv", ["term", "value"],
               [("lower_bound", cert.lower_bound), ("harnack_term", cert.harnack_term),
                ("annulus_term", cert.annulus_term), ("gauge_term", cert.gauge_term),
                ("boundary_sup", cert.boundary_sup), ("content_budget", cert.content_budget)])
    exc = rep.exceptional_points
    _write_csv(out_dir / "exceptional.csv", ["re", "im", "u"],
               [(float(z.real), float(z.imag), float(v))
                for z, v in zip(exc, rep.s_values[rep.exceptional_mask])])
    cover = rep.measured_content
    report = {
        "config": {
            "problem": {"R": prob.R, "s0": prob.s0, "r": prob.r},
            "gauge": config["gauge"],
            "zeros": sample.to_list(),
            "grid": {"radii": grid.radii, "angles": grid.angles},
            "seed": config.get("seed"),
            "tolerance": tolerance,
        },
        "certificate": cert_dict,
        "verification": dict(rep.summary(), cover=[
            {"center": [float(c[0]), float(c[1])], "radius": float(rad)} for c, rad in cover.cover
        ]),
        "series": {"rays": "rays.csv", "bounds": "bounds.csv", "exceptional": "exceptional.csv"},
    }
    (out_dir / "report.json").write_text(_dumps(report), encoding="utf-8")
    print(_dumps({"report": str(out_dir / "report.json"), **rep.summary()}), end="")
    if rep.budget_exceeded or rep.pointwise_violations:
        return EXIT_CERTIFY
    return EXIT_OK


def read_points(path) -> np.ndarray:
    try:
        lines = Path(path).read_text("utf-8").splitlines()
    except OSError as exc:
        raise ValidationError("points", f"cannot read points file: {exc}") from None
    pts = []
    for n, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        pts.append(_point(line, f"points:{n}", 2))
    return np.array(pts, dtype=float).reshape(-1, 2)


def cmd_content(args) -> dict:
    pts = read_points(args.points)
    gauge = Gauge.power(args.p, args.B)
    est = content_upper(pts, gauge, args.r, args.method)
    return {
        "value": est.value,
        "method": est.method,
        "gauge": {"kind": "power", "p": args.p, "B": args.B},
        "r": args.r,
        "points": int(pts.shape[0]),
        "cover": [{"center": [float(c[0]), float(c[1])], "radius": float(rad)} for c, rad in est.cover],
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="minorant", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    h = sub.add_parser("harnack", help="Harnack distance on a ball: closed form, triangle bound, oracle")
    h.add_argument("--d", type=int, default=2)
    h.add_argument("--r", type=float, default=1.0)
    h.add_argument("--x", required=True, help="comma-separated coordinates")
    h.add_argument("--y", default=None, help="comma-separated coordinates (default: centre)")
    h.add_argument("--tolerance", type=float, default=1e-12)

    c = sub.add_parser("certify", help="certificate plus end-to-end verification from a config file")
    c.add_argument("--config", required=True)
    c.add_argument("--out", default=None)
    c.add_argument("--seed", type=int, default=None)
    c.add_argument("--tolerance", type=float, default=None)

    k = sub.add_parser("content", help="upper estimate of the h-content of a point set")
    k.add_argument("--points", required=True, help="file with one 're,im' point per line")
    k.add_argument("--p", type=float, default=1.0)
    k.add_argument("--B", type=float, default=1.0)
    k.add_argument("--r", type=float, required=True)
    k.add_argument("--method", default="auto", choices=["auto", "single_ball", "greedy", "exhaustive_small"])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "harnack":
            print(_dumps(cmd_harnack(args)), end="")
            return EXIT_OK
        if args.command == "content":
            print(_dumps(cmd_content(args)), end="")
            return EXIT_OK
        return cmd_certify(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, DivergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericFailure as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
