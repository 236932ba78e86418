"""Command-line entry point: ``qkmetric <command> [options]``.

Exit status is 0 when every check passes, 1 when any check fails (domain
errors met while checking count as failures) and 2 for usage or
configuration errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from ..cmap import frames
from ..cmap.metric import QkPoint, deformed_fs_metric
from ..errors import ConfigError, GeometryError
from ..prepotential import Quadratic, VerySpecial
from ..sampling import random_base_point, random_base_points, random_qk_points
from ..special_kahler import admissible_k
from .config import COMMANDS, ScenarioConfig, load_toml
from .report import build_report, to_csv, to_json
from .suites import DEFAULT_TOLERANCES, Check, Task, run_task

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# k in gbar >= (k/4) (d^c K)^2 for cubic models; quadratic models scan for it
CUBIC_K = 1.0 / 3.0
K_SCAN_POINTS = 1000
DEFAULT_DOMAIN_RHOS = (-1.5, -0.5, 0.5, 1.5, 3.0)
FIBRE_RHO_RANGE = (0.6, 2.0)

_HELP = {
    "verify": "frame-form identities, Kähler form routes, quaternion relations, lower bounds, r-map algebra",
    "einstein": "Einstein residual and scalar curvature (add --covariant for |nabla R| = 0 at c = 0)",
    "rnorm2": "|Riem|^2 against the closed form for h = x1^3 over every (c, rho)",
    "isometry": "scaling isometry pullback and, for quadratic models, the explicit closed form",
    "geodesic": "radial length divergence, base-boundary divergence, geodesic energy",
    "domains": "classification of (c, rho) into the domains of definition",
}


def _csv_floats(text: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _tol_pair(text: str) -> tuple:
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"--tol expects name=value, got {text!r}")
    try:
        return key.strip(), float(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"--tol value for {key!r} is not a number") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML scenario file; flags override its entries")
    common.add_argument("--model", choices=["quadratic", "very-special"])
    common.add_argument("--n", type=int, help="complex dimension of the base")
    common.add_argument("--h", help='cubic polynomial, e.g. "x1^3" or "x1^2*x2 - x2^3"')
    common.add_argument("--c", type=_csv_floats, help="comma-separated deformation parameters")
    common.add_argument("--rho", type=_csv_floats, help="comma-separated rho values")
    common.add_argument("--points", type=int, help="random sample points per value of c")
    common.add_argument("--seed", type=int)
    common.add_argument("--steps", type=int, help="RK4 steps for geodesic energy checks")
    common.add_argument("--covariant", action="store_true", default=None, help="also require nabla R = 0 at c = 0 (locally symmetric targets only)")
    common.add_argument("--tol", type=_tol_pair, action="append", metavar="NAME=VALUE", help="override a tolerance")
    common.add_argument("--out", help="output path (default: standard output)")
    common.add_argument("--format", choices=["json", "csv"])
    common.add_argument("--jobs", type=int, help="worker processes")

    parser = argparse.ArgumentParser(prog="qkmetric", description="Numerical checks of deformed c-map metrics.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=_HELP[name], description=_HELP[name])
    return parser


def resolve_config(args: argparse.Namespace) -> ScenarioConfig:
    values: dict = {}
    if args.config:
        values.update(load_toml(args.config))
    values["command"] = args.command
    for key in ("model", "n", "h", "c", "rho", "points", "seed", "steps", "covariant", "out", "format", "jobs"):
        flag = getattr(args, key)
        if flag is not None:
            values[key] = flag
    if args.h is not None:
        values.pop("cubic", None)
        values.setdefault("model", "very-special")
    tol = dict(values.get("tol", ()))
    tol.update(dict(args.tol or ()))
    unknown = sorted(set(tol) - set(DEFAULT_TOLERANCES))
    if unknown:
        raise ConfigError(f"unknown tolerance names {unknown}; known: {sorted(DEFAULT_TOLERANCES)}")
    values["tol"] = tuple(sorted(tol.items()))
    if args.command == "rnorm2" and "rho" not in values:
        values["rho"] = (1.0,)
    if args.command == "domains" and not values.get("rho"):
        values["rho"] = DEFAULT_DOMAIN_RHOS
    return ScenarioConfig(**values).validated()


def _conventions(model, seed: int, c_values) -> tuple[dict, int, int]:
    c_ref = max([c for c in c_values if c >= 0] or [0.0]) or 0.5
    q = random_qk_points(model, 1, np.random.default_rng([seed, 1]), rho_range=FIBRE_RHO_RANGE)[0]
    s = frames.select_dc_sign(model, c_ref, q)
    g = deformed_fs_metric(model, c_ref, q, s)
    Js = [frames.complex_structure(g, w) for w in frames.kahler_forms(model, c_ref, q, s)]
    sigma = frames.quaternion_sign(*Js)
    return {"dc_sign": s, "sigma": sigma, "reference_c": c_ref, "reference_point": q.chart.tolist()}, s, sigma


def _lower_bound_k(model, seed: int) -> float:
    if isinstance(model, VerySpecial):
        return CUBIC_K
    if model.n == 0:
        return 1.0
    rng = np.random.default_rng([seed, 2])
    return float(min(admissible_k(model, p) for p in random_base_points(model, K_SCAN_POINTS, rng)))


def _require_cubed_line(model):
    ok = (
        isinstance(model, VerySpecial)
        and model.n == 1
        and model.cubic.coefficients[0, 0, 0] > 0
    )
    if not ok:
        raise ConfigError("rnorm2 compares against the closed form for h = a x1^3 (a > 0, n = 1) only")


def plan(cfg: ScenarioConfig, model):
    """Sample points and build the task list."""
    rng = np.random.default_rng(cfg.seed)
    points, specs = [], []
    if cfg.command == "domains":
        base = random_base_point(model, rng)
        for c in cfg.c:
            for rho in cfg.rho:
                q = QkPoint(base.X, rho, 0.0, np.zeros(model.n + 1), np.zeros(model.n + 1))
                specs.append((c, q))
    elif cfg.command == "rnorm2":
        _require_cubed_line(model)
        for c in cfg.c:
            for rho in cfg.rho:
                specs.append((c, random_qk_points(model, 1, rng, rho=rho)[0]))
    else:
        for c in cfg.c:
            for j in range(cfg.points):
                rho = cfg.rho[j % len(cfg.rho)] if cfg.rho else None
                specs.append((c, random_qk_points(model, 1, rng, rho_range=FIBRE_RHO_RANGE, rho=rho)[0]))
    for idx, (c, q) in enumerate(specs):
        points.append({"index": idx, "c": float(c), "coords": q.chart.tolist()})
    return specs, points


def run(cfg: ScenarioConfig) -> dict:
    model = cfg.build_model()
    tol = {**DEFAULT_TOLERANCES, **cfg.tolerances}
    specs, points = plan(cfg, model)
    conventions, s, sigma = _conventions(model, cfg.seed, cfg.c)
    parameters = {}
    k = 1.0
    if cfg.command == "verify":
        k = _lower_bound_k(model, cfg.seed)
        parameters["lower_bound_k"] = k
    tasks = [
        Task(cfg.command, model, c, idx, q, tol, s, sigma, k, cfg.steps, cfg.covariant, cfg.seed)
        for idx, (c, q) in enumerate(specs)
    ]
    if cfg.command == "geodesic" and isinstance(model, Quadratic) and model.n >= 1:
        tasks.append(Task("geodesic.base_boundary", model, 0.0, 0, specs[0][1], tol))
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(run_task, tasks))
    else:
        results = [run_task(t) for t in tasks]
    checks = [ch for batch in results for ch in batch]
    if cfg.command == "rnorm2":
        checks.extend(_variation_checks(specs, checks, tol["rnorm2.variation"]))
    return build_report(cfg, conventions, parameters, points, checks)


def _variation_checks(specs, checks, tol):
    """Relative spread of |Riem|^2 over rho for each c > 0 (needs two or more rho)."""
    values = {ch.point_index: ch.computed for ch in checks if ch.name == "rnorm2" and ch.computed is not None}
    by_c: dict = {}
    for idx, (c, _) in enumerate(specs):
        if c > 0 and idx in values:
            by_c.setdefault(c, []).append((idx, values[idx]))
    out = []
    for c, items in by_c.items():
        if len(items) < 2:
            continue
        vals = [v for _, v in items]
        spread = (max(vals) - min(vals)) / max(abs(v) for v in vals)
        out.append(Check("rnorm2.variation", items[0][0], spread, tol, tol, bool(spread > tol),
                         f"c = {c:g}: spread over {len(items)} values of rho must exceed the tolerance"))
    return out


def _write(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        cfg = resolve_config(args)
        report = run(cfg)
    except (ConfigError, TypeError) as exc:
        print(f"qkmetric: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GeometryError as exc:
        print(f"qkmetric: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if cfg.format == "csv":
        _write(to_csv(report), cfg.out)
        if cfg.out is not None:
            _write(to_json(report), str(Path(cfg.out).with_suffix(".json")))
    else:
        _write(to_json(report), cfg.out)
    summary = report["summary"]
    print(f"{summary['passed']}/{summary['total']} checks passed", file=sys.stderr)
    return EXIT_PASS if summary["status"] == "pass" else EXIT_FAIL


def main_entry() -> None:
    sys.exit(main())
