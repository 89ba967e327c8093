"""Command-line front end: ``polylab <subcommand> [options]``.

Settings are layered: built-in defaults, then the ``[experiment]`` section of
``--config``, then the section named after the subcommand, then flags.
Each run writes ``report.json``, ``trials.csv``, one SVG per curve and a
``manifest.json`` (the only file carrying timestamps) into ``--out``.
"""
from __future__ import annotations

import argparse
import configparser
import dataclasses
import hashlib
import json
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

from . import experiments as ex
from ._parallel import resolve_workers
from .distributions import parse_dist
from .errors import ConfigurationError, DomainError, NetError, ResourceError, SolverError
from .nets import save_net
from .plots import emit_svg

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_CHECK = 0, 2, 3, 4

SUBCOMMANDS = ("norms", "partition", "gauge", "tail", "cardinality", "oscillation", "containment", "end2end")

_INT = {"n", "N", "trials", "draws", "directions", "seed", "probe_budget", "workers"}
_FLOAT = {"alpha", "r", "r_scale", "c_prime", "c0", "theta", "rho", "rmax", "net_radius", "kappa", "delta"}
_STR = {"dist", "z_mode", "fixture"}
_LIST = {"r_values", "v"}
KEYS = _INT | _FLOAT | _STR | _LIST


def _convert(key: str, raw):
    if raw is None:
        return None
    try:
        if key in _INT:
            return int(raw)
        if key in _FLOAT:
            return float(raw)
        if key in _LIST:
            if isinstance(raw, (list, tuple)):
                return tuple(float(x) for x in raw)
            return tuple(float(x) for x in str(raw).replace(";", ",").split(",") if x.strip())
    except ValueError as e:
        raise ConfigurationError(f"bad value for {key}: {raw!r}") from e
    return str(raw).strip()


def read_config(path, subcommand: str) -> dict:
    """Settings from an INI file: ``[experiment]`` first, then ``[<subcommand>]``."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # keep n and N distinct
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as e:
        raise ConfigurationError(f"cannot read config {path}: {e}") from e
    out = {}
    for section in ("experiment", subcommand):
        if cp.has_section(section):
            for key, val in cp.items(section):
                key = key.replace("-", "_")
                if key not in KEYS:
                    raise ConfigurationError(f"unknown config key {key!r} in [{section}]")
                out[key] = _convert(key, val)
    return out


def build_config(settings: dict) -> tuple[ex.ExperimentConfig, dict]:
    """``ExperimentConfig`` plus the leftover subcommand-specific settings."""
    s = dict(settings)
    extra = {k: s.pop(k) for k in ("v",) if k in s}
    kappa, delta = s.pop("kappa", None), s.pop("delta", None)
    if "dist" in s or kappa is not None or delta is not None:
        s["dist"] = parse_dist(s.get("dist", "gaussian"), kappa=kappa, delta=delta)
    fields = {f.name for f in dataclasses.fields(ex.ExperimentConfig)}
    return ex.ExperimentConfig(**{k: v for k, v in s.items() if k in fields}), extra


def _campaign(sub: str, cfg: ex.ExperimentConfig, extra: dict, out: Path):
    if sub == "norms":
        return ex.campaign_holmstedt(cfg)
    if sub == "partition":
        return ex.campaign_partition(cfg)
    if sub == "gauge":
        return ex.campaign_gauge(cfg, extra.get("v"))
    if sub == "tail":
        return ex.tail_report(cfg, ex.exp_individual_tail(cfg))
    if sub == "cardinality":
        return ex.cardinality_report(cfg, ex.exp_cardinality(cfg))
    if sub == "oscillation":
        return ex.oscillation_report(cfg, ex.exp_oscillation(cfg))
    if sub == "containment":
        return ex.containment_report(cfg, ex.exp_containment(cfg))
    if sub == "end2end":
        net = ex.default_net(cfg)
        out.mkdir(parents=True, exist_ok=True)
        save_net(net, out / "net.txt")
        return ex.end_to_end_report(cfg, ex.exp_end_to_end(cfg, net))
    raise ConfigurationError(f"unknown subcommand {sub!r}")


def _run_one(sub: str, settings: dict, out: Path) -> tuple[int, list]:
    cfg, extra = build_config(settings)
    report = _campaign(sub, cfg, extra, out)
    files = report.write(out)
    if sub == "end2end":
        files.insert(0, out / "net.txt")
    for name, data in report.curves.items():
        path = out / f"{name}.svg"
        path.write_text(emit_svg(data, title=name.replace("_", " ")), encoding="utf-8")
        files.append(path)
    if report.passed:
        return EXIT_OK, files
    print(f"polylab {sub}: failed checks: {', '.join(report.failed_checks())}", file=sys.stderr)
    return EXIT_CHECK, files


def run(subcommand: str, config_path=None, overrides: dict | None = None, out=".") -> int:
    """Run one subcommand (or ``all``) and return the process exit code."""
    out = Path(out)
    started = datetime.now(timezone.utc)
    t0 = time.perf_counter()
    settings, digest, files = {}, None, []
    subs = SUBCOMMANDS if subcommand == "all" else (subcommand,)
    code = EXIT_OK
    try:
        for sub in subs:
            settings = {}
            if config_path is not None:
                digest = hashlib.sha256(Path(config_path).read_bytes()).hexdigest()
                settings.update(read_config(config_path, sub))
            settings.update({k: v for k, v in (overrides or {}).items() if v is not None})
            if "workers" not in settings:
                settings["workers"] = resolve_workers(None)
            target = out / sub if subcommand == "all" else out
            rc, written = _run_one(sub, settings, target)
            code = max(code, rc)
            files += written
    except (ConfigurationError, DomainError, ResourceError) as e:
        print(f"polylab {subcommand}: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, NetError) as e:
        diag = getattr(e, "diagnostics", None)
        print(f"polylab {subcommand}: solver error: {e}" + (f" {diag}" if diag else ""), file=sys.stderr)
        return EXIT_SOLVER
    except OSError as e:
        print(f"polylab {subcommand}: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    manifest = {
        "subcommand": subcommand,
        "config_path": None if config_path is None else str(config_path),
        "config_sha256": digest,
        "seed": settings.get("seed", 0),
        "overrides": {k: v for k, v in (overrides or {}).items() if v is not None},
        "started": started.isoformat(),
        "finished": datetime.now(timezone.utc).isoformat(),
        "wall_time_s": time.perf_counter() - t0,
        "outputs": sorted(str(f.relative_to(out)) for f in files),
        "exit_code": code,
    }
    out.mkdir(parents=True, exist_ok=True)
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--config", help="INI file; [experiment] and [<subcommand>] sections")
    common.add_argument("--out", default="polylab_out", help="output directory")
    common.add_argument("--workers", type=int, help="worker processes (default: $POLYLAB_WORKERS or 1)")
    common.add_argument("--seed", type=int)
    common.add_argument("--dist", help="gaussian, rademacher, uniform, student_t:5, pareto:3, twopoint:a=2,p=0.125")
    common.add_argument("--kappa", type=float, help="small-ball level override")
    common.add_argument("--delta", type=float, help="small-ball mass override")
    common.add_argument("--n", type=int, dest="n")
    common.add_argument("--N", type=int, dest="N")
    common.add_argument("--alpha", type=float)
    common.add_argument("--r", type=float, dest="r")
    common.add_argument("--r-scale", type=float, dest="r_scale")
    common.add_argument("--rho", type=float)
    common.add_argument("--trials", type=int)
    common.add_argument("--draws", type=int)
    common.add_argument("--directions", type=int)
    common.add_argument("--fixture", choices=sorted(ex.FIXTURES))
    common.add_argument("--c-prime", type=float, dest="c_prime")
    common.add_argument("--c0", type=float)
    common.add_argument("--theta", type=float)
    common.add_argument("--rmax", type=float)
    common.add_argument("--r-values", dest="r_values", help="comma-separated grid of r")
    common.add_argument("--z-mode", dest="z_mode", choices=ex.Z_MODES)
    common.add_argument("--net-radius", type=float, dest="net_radius")
    common.add_argument("--probe-budget", type=int, dest="probe_budget")
    common.add_argument("--v", help="comma-separated vector for the gauge subcommand")

    parser = argparse.ArgumentParser(prog="polylab", description="Random polytope small-ball campaigns.", allow_abbrev=False)
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS + ("all",):
        sub.add_parser(name, parents=[common], allow_abbrev=False)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {}
    for key in KEYS:
        val = getattr(args, key, None)
        if val is not None:
            try:
                overrides[key] = _convert(key, val)
            except ConfigurationError as e:
                print(f"polylab: configuration error: {e}", file=sys.stderr)
                return EXIT_CONFIG
    if args.workers is not None:
        overrides["workers"] = args.workers
    return run(args.subcommand, args.config, overrides, args.out)


if __name__ == "__main__":
    sys.exit(main())
