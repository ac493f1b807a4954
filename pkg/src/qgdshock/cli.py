"""Command-line front end: solve, sweep, grid-study and compare.

Exit statuses: 0 converged / ok, 1 usage or I/O error, 2 not converged,
3 diverged, 4 comparison tolerance exceeded.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import hashlib
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .diagnostics import (
    normalized_profiles,
    oscillation_amplitude,
    reciprocal_thickness,
)
from .gas import GasSpec, get_gas
from .marcher import DivergenceError, SolverConfig, run_to_steady
from .reference import compare_thickness, load_reference_csv

log = logging.getLogger("qgdshock")

EXIT_OK, EXIT_USAGE, EXIT_NOT_CONVERGED, EXIT_DIVERGED, EXIT_TOLERANCE = 0, 1, 2, 3, 4

SWEEP_COLUMNS = ("gas", "Ma", "model", "recip_thickness", "steps", "converged")
CONFIG_KEYS = ("Ma", "gas", "model", "n_x", "h_x", "a", "eps", "max_steps",
               "residual_log_stride", "divergence_factor")


class UsageError(Exception):
    pass


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def load_config_file(path) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    unknown = set(data) - set(CONFIG_KEYS)
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    return data


def resolve_gas(value) -> GasSpec:
    if isinstance(value, GasSpec):
        return value
    if isinstance(value, dict):
        return GasSpec(**value)
    return get_gas(value)


def build_config(file_values: dict, overrides: dict) -> SolverConfig:
    """Defaults < config file < command-line overrides (``None`` means unset)."""
    merged = dict(file_values)
    merged.update({k: v for k, v in overrides.items() if v is not None})
    if "Ma" not in merged or "gas" not in merged:
        raise UsageError("both a gas and a Mach number are required")
    merged["gas"] = resolve_gas(merged["gas"])
    for key in ("n_x", "max_steps", "residual_log_stride"):
        if key in merged:
            merged[key] = int(float(merged[key]))
    return SolverConfig(**merged)


def manifest(cfgs, inputs=()) -> dict:
    return {
        "artifact_version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "configs": [c.to_dict() for c in cfgs],
        "inputs": {str(p): _digest(p) for p in inputs},
    }


def _write_manifest(path, cfgs, inputs=()) -> None:
    Path(path).write_text(json.dumps(manifest(cfgs, inputs), indent=2) + "\n", encoding="utf-8")


def solve_one(cfg: SolverConfig) -> dict:
    """Run one case and summarize it; divergence is reported, not raised."""
    try:
        sol = run_to_steady(cfg)
    except DivergenceError as exc:
        return {"gas": cfg.gas.name, "Ma": cfg.Ma, "model": cfg.model.value,
                "recip_thickness": None, "steps": exc.step, "converged": False,
                "status": "diverged", "message": str(exc), "solution": None}
    ok = sol.stats.converged
    return {
        "gas": cfg.gas.name,
        "Ma": cfg.Ma,
        "model": cfg.model.value,
        "recip_thickness": reciprocal_thickness(sol) if ok else None,
        "steps": sol.stats.steps_taken,
        "converged": ok,
        "status": "converged" if ok else "not_converged",
        "oscillation_amplitude": oscillation_amplitude(sol).amplitude if ok else None,
        "final_residual": sol.stats.final_residual,
        "wall_time": sol.stats.wall_time,
        "solution": sol,
    }


def _status_code(statuses) -> int:
    if "diverged" in statuses:
        return EXIT_DIVERGED
    if "not_converged" in statuses:
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def solve_cmd(cfg: SolverConfig, out_dir, inputs=()) -> tuple[int, dict]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"{cfg.gas.name}_{cfg.model.value}_Ma{cfg.Ma:g}"
    res = solve_one(cfg)
    sol = res.pop("solution")
    if sol is not None:
        normalized_profiles(sol).write_csv(out_dir / f"{stem}_profile.csv")
    keys = ("gas", "Ma", "model", "recip_thickness", "steps", "converged", "status",
            "oscillation_amplitude", "final_residual", "wall_time", "message")
    lines = [f"{k}={_fmt(res.get(k))}" for k in keys if k in res]
    (out_dir / f"{stem}_summary.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    _write_manifest(out_dir / f"{stem}_manifest.json", [cfg], inputs)
    return _status_code([res["status"]]), res


def _run_all(cfgs, jobs: int):
    if jobs > 1 and len(cfgs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(solve_one, cfgs))
    else:
        results = [solve_one(c) for c in cfgs]
    for r in results:
        r.pop("solution", None)
    return results


def write_sweep_csv(rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for r in rows:
            w.writerow([_fmt(r[c]) for c in SWEEP_COLUMNS])


def read_sweep_csv(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != SWEEP_COLUMNS:
            raise UsageError(f"{path}: expected columns {','.join(SWEEP_COLUMNS)}")
        rows = []
        for r in reader:
            rows.append({
                "gas": r["gas"],
                "Ma": float(r["Ma"]),
                "model": r["model"],
                "recip_thickness": float(r["recip_thickness"]) if r["recip_thickness"] else None,
                "steps": int(r["steps"]),
                "converged": r["converged"] == "true",
            })
    return rows


def sweep_cmd(base: SolverConfig, machs, models, out, jobs: int = 1, inputs=()) -> tuple[int, list]:
    """One run per (Ma, model), rows ordered by Ma then by the given model order."""
    cfgs = [base.replace(Ma=float(m), model=mod) for m in machs for mod in models]
    rows = _run_all(cfgs, jobs)
    write_sweep_csv(rows, out)
    _write_manifest(f"{out}.manifest.json", cfgs, inputs)
    return _status_code([r["status"] for r in rows]), rows


GRID_COLUMNS = ("level", "n_x", "h_x", "a", "recip_thickness", "rel_change", "steps", "converged")


def grid_study_cmd(base: SolverConfig, levels: int, out, a_scale: float = 0.5,
                   jobs: int = 1, inputs=()) -> tuple[int, list]:
    """Halve h_x (doubling n_x) per level; a is multiplied by ``a_scale`` per level
    so the explicit step stays within the diffusive stability limit."""
    if levels < 2:
        raise UsageError("grid study needs at least 2 levels")
    cfgs = [base.replace(n_x=base.n_x * 2**k, h_x=base.h_x / 2**k, a=base.a * a_scale**k)
            for k in range(levels)]
    results = _run_all(cfgs, jobs)
    rows, prev = [], None
    for k, (c, r) in enumerate(zip(cfgs, results)):
        lt = r["recip_thickness"]
        change = (lt - prev) / prev if (lt is not None and prev is not None) else None
        rows.append({"level": k, "n_x": c.n_x, "h_x": c.h_x, "a": c.a, "recip_thickness": lt,
                     "rel_change": change, "steps": r["steps"], "converged": r["converged"],
                     "status": r["status"]})
        prev = lt
    with open(out, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(GRID_COLUMNS)
        for r in rows:
            w.writerow([_fmt(r[c]) for c in GRID_COLUMNS])
    _write_manifest(f"{out}.manifest.json", cfgs, inputs)
    return _status_code([r["status"] for r in rows]), rows


def compare_cmd(sweep_csv, reference_csv, tolerance=None, model=None, out=None):
    rows = read_sweep_csv(sweep_csv)
    ref = load_reference_csv(reference_csv)
    pts = [(r["Ma"], r["recip_thickness"]) for r in rows
           if r["recip_thickness"] is not None and (model is None or r["model"] == model)]
    if not pts:
        raise UsageError("sweep file has no converged rows to compare")
    report = compare_thickness(pts, ref)
    text = report.render()
    if out:
        Path(out).write_text(text, encoding="utf-8")
    code = EXIT_OK
    if tolerance is not None and report.max_deviation > tolerance:
        code = EXIT_TOLERANCE
    return code, report, text


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(values):
    out = []
    for v in values:
        out += [float(s) for s in str(v).split(",") if s]
    return out


def _add_solver_flags(p, many_mach=False):
    p.add_argument("--config", help="JSON file with SolverConfig keys")
    p.add_argument("--gas", help="argon, helium or nitrogen")
    if many_mach:
        p.add_argument("--Ma", nargs="+", required=True, help="Mach numbers (space or comma separated)")
    else:
        p.add_argument("--Ma", type=float)
    p.add_argument("--n-x", dest="n_x", type=int)
    p.add_argument("--h-x", dest="h_x", type=float)
    p.add_argument("-a", "--a", dest="a", type=float, help="time-step factor")
    p.add_argument("--eps", type=float)
    p.add_argument("--max-steps", dest="max_steps", type=float)
    p.add_argument("--log-stride", dest="residual_log_stride", type=int)


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qgdshock", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="compute one shock profile")
    _add_solver_flags(p)
    p.add_argument("--model", choices=("ns", "qgd"))
    p.add_argument("--out-dir", default=".")

    p = sub.add_parser("sweep", help="reciprocal thickness over several Mach numbers")
    _add_solver_flags(p, many_mach=True)
    p.add_argument("--models", default="qgd,ns", help="comma-separated subset of ns,qgd")
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("grid-study", help="repeat one case on successively halved grids")
    _add_solver_flags(p)
    p.add_argument("--model", choices=("ns", "qgd"))
    p.add_argument("--levels", type=int, default=2)
    p.add_argument("--a-scale", type=float, default=0.5)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("compare", help="compare a sweep table with reference data")
    p.add_argument("sweep_csv")
    p.add_argument("reference_csv")
    p.add_argument("--model", choices=("ns", "qgd"))
    p.add_argument("--tolerance", type=float)
    p.add_argument("--out")
    return parser


def _overrides(args, **extra) -> dict:
    keys = ("gas", "Ma", "model", "n_x", "h_x", "a", "eps", "max_steps", "residual_log_stride")
    d = {k: getattr(args, k, None) for k in keys}
    d.update(extra)
    return d


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "compare":
            code, _, text = compare_cmd(args.sweep_csv, args.reference_csv,
                                        args.tolerance, args.model, args.out)
            sys.stdout.write(text)
            return code
        file_values = load_config_file(args.config) if args.config else {}
        inputs = [args.config] if args.config else []
        if args.command == "solve":
            cfg = build_config(file_values, _overrides(args))
            code, res = solve_cmd(cfg, args.out_dir, inputs)
            print(" ".join(f"{k}={_fmt(v)}" for k, v in res.items()))
            return code
        if args.command == "sweep":
            machs = _float_list(args.Ma)
            models = [m.strip() for m in args.models.split(",") if m.strip()]
            base = build_config(file_values, _overrides(args, Ma=machs[0], model=models[0]))
            code, rows = sweep_cmd(base, machs, models, args.out, args.jobs, inputs)
            for r in rows:
                print(" ".join(f"{c}={_fmt(r[c])}" for c in SWEEP_COLUMNS))
            return code
        if args.command == "grid-study":
            base = build_config(file_values, _overrides(args))
            code, rows = grid_study_cmd(base, args.levels, args.out, args.a_scale, args.jobs, inputs)
            for r in rows:
                print(" ".join(f"{c}={_fmt(r[c])}" for c in GRID_COLUMNS))
            return code
    except (UsageError, ValueError, OSError) as exc:
        print(f"qgdshock: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
