"""
Proximate growth toolkit - command line entry point.

  python run.py validate-model --m id
  python run.py check --v powlog:rho=3,b=2 --m id
  python run.py construct --a oscslow:rho=2,a=1 --m id --window 0.9 --out build/osc

Reports are JSON on stdout (and --json PATH). Exit codes: 0 success/consistent,
2 analysis-negative, 1 usage or IO error.
"""
import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

# Ensure project root (parent of src/) is on path when run as script
if __name__ == "__main__" and "__file__" in dir():
    _root = Path(__file__).resolve().parent.parent
    if str(_root) not in sys.path:
        sys.path.insert(0, str(_root))

import numpy as np

from . import __version__
from .asymptotics import estimate_liminf, estimate_limit, estimate_limsup
from .config import Config
from .construct import construct_proximate
from .core import AnalyticFamily, GridSpec
from .errors import InfiniteOrderError, ModelValidationError, ProxGrowthError
from .families.growth import GROWTH_CATALOG, MODEL_NAMES, ORDER_CATALOG
from .families.plane import PLANE_CATALOG
from .model import validate_model
from .proximate import check_valiron, equivalence_report, valiron_bridge
from .specs import parse_function_spec, resolve_plane, resolve_source
from .subharmonic import means_series

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_NEGATIVE = 0, 1, 2


def _to_builtin(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _config_from_args(args: argparse.Namespace) -> Config:
    cfg = Config.from_env()
    if args.x0 is not None:
        cfg.grid.x0 = args.x0
    if args.x1 is not None:
        cfg.grid.x1 = args.x1
    if args.n is not None:
        cfg.grid.n = args.n
    if args.tol is not None:
        cfg.limits.tol_limit = args.tol
    if args.window is not None:
        cfg.limits.tail_fraction = args.window
        cfg.construct.order_tail_fraction = args.window
    if getattr(args, "normalization", None):
        cfg.quadrature.normalization = args.normalization
    return cfg


def _grid_for(cfg: Config, *sources) -> GridSpec:
    """Configured grid, clipped to the representable range of the given families."""
    x_max = min((s.x_max for s in sources if isinstance(s, AnalyticFamily)), default=np.inf)
    x1 = cfg.grid.x1
    if x_max < x1:
        logger.warning("Grid end x1=%g clipped to %g to stay representable", x1, x_max)
        x1 = x_max
        cfg.grid.x1 = x1
    return GridSpec(cfg.grid.x0, x1, cfg.grid.n)


def cmd_validate_model(args, cfg: Config) -> Tuple[dict, int]:
    M = resolve_source(parse_function_spec(args.m))
    report = validate_model(M, _grid_for(cfg, M), cfg.model, cfg.limits, numeric=args.numeric)
    return report.to_dict(), EXIT_OK if report.passing else EXIT_NEGATIVE


def cmd_check(args, cfg: Config) -> Tuple[dict, int]:
    V = resolve_source(parse_function_spec(args.v))
    M = resolve_source(parse_function_spec(args.m))
    report = equivalence_report(V, M, _grid_for(cfg, V, M), cfg, numeric=args.numeric)
    return report.to_dict(), EXIT_OK if report.theorem_consistent else EXIT_NEGATIVE


def cmd_valiron(args, cfg: Config) -> Tuple[dict, int]:
    rho = resolve_source(parse_function_spec(args.rho), kind="order")
    grid = _grid_for(cfg, rho)
    verdict = check_valiron(rho, grid, cfg.limits, numeric=args.numeric)
    bridge = valiron_bridge(rho, grid, cfg.limits, numeric=args.numeric)
    payload = {"check_valiron": verdict.to_dict(), "valiron_bridge": bridge.to_dict()}
    return payload, EXIT_OK if bridge.agree else EXIT_NEGATIVE


def cmd_construct(args, cfg: Config) -> Tuple[dict, int]:
    A = resolve_source(parse_function_spec(args.a))
    M = resolve_source(parse_function_spec(args.m))
    result = construct_proximate(A, M, _grid_for(cfg, A, M), cfg)
    payload = result.to_dict()
    if args.out:
        out = Path(f"{args.out}.csv")
        out.parent.mkdir(parents=True, exist_ok=True)
        result.to_frame().to_csv(out, index=False, float_format="%.17g")
        payload["csv"] = str(out)
        logger.info("Wrote %s", out)
    return payload, EXIT_OK if result.success else EXIT_NEGATIVE


def cmd_means(args, cfg: Config) -> Tuple[dict, int]:
    u = resolve_plane(parse_function_spec(args.u))
    radii = np.geomspace(args.r0, args.r1, args.nr)
    series = means_series(u, radii, cfg.quadrature, shift=args.shift)
    payload = series.to_dict()
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        series.to_frame().to_csv(out, index=False, float_format="%.17g")
        payload["csv"] = str(out)
        logger.info("Wrote %s", out)
    return payload, EXIT_OK


def cmd_limits(args, cfg: Config) -> Tuple[dict, int]:
    spec = parse_function_spec(args.track)
    if spec.kind != "csv":
        raise ProxGrowthError("limits expects a csv:path[#col] track")
    track = resolve_source(spec, kind="order")
    limit = estimate_limit(track, cfg.limits)
    payload = {
        "limit": limit.to_dict(),
        "limsup": estimate_limsup(track, cfg.limits).to_dict(),
        "liminf": estimate_liminf(track, cfg.limits).to_dict(),
    }
    return payload, EXIT_OK if limit.converged else EXIT_NEGATIVE


def cmd_catalog(args, cfg: Config) -> Tuple[dict, int]:
    payload = {
        "growth": sorted(GROWTH_CATALOG),
        "order": sorted(ORDER_CATALOG),
        "plane": sorted(PLANE_CATALOG),
        "models": list(MODEL_NAMES),
    }
    return payload, EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace, Config], Tuple[dict, int]]] = {
    "validate-model": cmd_validate_model,
    "check": cmd_check,
    "valiron": cmd_valiron,
    "construct": cmd_construct,
    "means": cmd_means,
    "limits": cmd_limits,
    "catalog": cmd_catalog,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--x0", type=float, default=None, help="Grid start in x = ln r")
    common.add_argument("--x1", type=float, default=None, help="Grid end in x = ln r")
    common.add_argument("--n", type=int, default=None, help="Grid points")
    common.add_argument("--tol", type=float, default=None, help="Limit tolerance")
    common.add_argument("--window", type=float, default=None, help="Tail window as a fraction of the x-range")
    common.add_argument("--numeric", action="store_true", help="Force numeric derivatives")
    common.add_argument("--json", default=None, help="Also write the report to this path")
    common.add_argument("--verbose", action="store_true", help="Debug logging")

    parser = argparse.ArgumentParser(
        prog="proxgrowth", description="Proximate growth functions relative to model growth functions"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate-model", parents=[common], help="Check the model growth clauses")
    p.add_argument("--m", required=True, help="Model candidate spec")

    p = sub.add_parser("check", parents=[common], help="Proximateness both ways and identity check")
    p.add_argument("--v", required=True, help="Growth function spec")
    p.add_argument("--m", required=True, help="Model spec")

    p = sub.add_parser("valiron", parents=[common], help="Valiron proximate order and its growth bridge")
    p.add_argument("--rho", required=True, help="Order function spec")

    p = sub.add_parser("construct", parents=[common], help="Build V with limsup A/V = 1")
    p.add_argument("--a", required=True, help="Increasing function spec")
    p.add_argument("--m", required=True, help="Model spec")
    p.add_argument("--out", default=None, help="CSV path prefix for x,lnA,lnV,rho_m")

    p = sub.add_parser("means", parents=[common], help="Circle, disk and sup means of a plane function")
    p.add_argument("--u", required=True, help="Plane function spec")
    p.add_argument("--r0", type=float, default=np.e)
    p.add_argument("--r1", type=float, default=np.e ** 10)
    p.add_argument("--nr", type=int, default=64, help="Number of radii (geometric)")
    p.add_argument("--normalization", choices=["area", "paper"], default=None)
    p.add_argument("--shift", type=float, default=0.0, help="Constant added to u")
    p.add_argument("--out", default=None, help="CSV path for r,c,b,m")

    p = sub.add_parser("limits", parents=[common], help="Tail limits of a CSV track")
    p.add_argument("--track", required=True, help="csv:path[#col]")

    sub.add_parser("catalog", parents=[common], help="List catalog families")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
    )

    cfg = _config_from_args(args)
    try:
        payload, code = COMMANDS[args.command](args, cfg)
    except (ModelValidationError, InfiniteOrderError) as e:
        logger.error("%s", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NEGATIVE
    except (ProxGrowthError, OSError) as e:
        logger.error("%s", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    options = {k: v for k, v in vars(args).items() if k != "command"}
    report = {
        "command": args.command,
        "options": {"flags": options, "config": asdict(cfg)},
        "payload": payload,
        "version": __version__,
        "schema_version": SCHEMA_VERSION,
    }
    text = json.dumps(report, sort_keys=True, indent=2, default=_to_builtin)
    print(text)
    if args.json:
        Path(args.json).write_text(text + "\n", encoding="utf-8")
    return code


if __name__ == "__main__":
    sys.exit(main())
