"""Command-line entry point.

Subcommands: run, scan, preset, validate, list-presets.  Output files are
plain CSV (or JSON) with the resolved config snapshot and a schema version
embedded; files appear atomically via write-then-rename and contain no
wall-clock information, so identical configs reproduce them byte-for-byte
regardless of worker count.
"""

from __future__ import annotations

import argparse
import importlib.resources
import json
import os
import sys
import tempfile
import time

import numpy as np

from .config import RunConfig, load_config, with_rtol
from .errors import NStirapError, ParseError, ValidationError
from .scenarios import (run_full_transfer, run_optical_pumping_prep,
                        run_partial_stirap, run_reverse_transfer, run_scan)

TIMESERIES_SCHEMA = "nstirap-timeseries-1"
SCAN_SCHEMA = "nstirap-scan-1"
SUMMARY_SCHEMA = "nstirap-summary-1"

TIMESERIES_COLUMNS = ("t_us", "rho_SS", "rho_PP", "rho_DD", "rho_QQ",
                      "re_rho_SQ", "im_rho_SQ", "re_rho_DQ", "im_rho_DQ",
                      "fidelity")
SCAN_COLUMNS = ("axis_value", "one_minus_F", "P_Q", "status")

# Built-in preset groups: one name fanning out to several shipped configs.
PRESET_GROUPS = {
    "fig4": ("fig4_weak", "fig4_mid", "fig4_strong"),
    "fig5": ("fig5_omb200", "fig5_omb400", "fig5_omb800"),
    "fig6": ("fig6_strong_near", "fig6_strong_far",
             "fig6_weak_near", "fig6_weak_far"),
}


def _preset_dir():
    return importlib.resources.files("nstirap") / "presets"


def list_preset_names() -> list[str]:
    names = sorted(p.name[:-5] for p in _preset_dir().iterdir()
                   if p.name.endswith(".yaml"))
    return sorted(set(names) | set(PRESET_GROUPS))


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".nstirap-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(x) -> str:
    return repr(float(x))


def _timeseries_rows(ts) -> list[tuple]:
    pops = ts.populations
    sq = ts.coherence(0, 3)
    dq = ts.coherence(2, 3)
    fid = ts.fidelity if ts.fidelity is not None else pops[:, 2]
    return [
        (t, pops[i, 0], pops[i, 1], pops[i, 2], pops[i, 3],
         sq[i].real, sq[i].imag, dq[i].real, dq[i].imag, fid[i])
        for i, t in enumerate(ts.times)
    ]


def _tabular_text(schema, cfg: RunConfig, columns, rows, fmt: str) -> str:
    if fmt == "json":
        doc = {"schema": schema, "config": cfg.snapshot,
               "columns": list(columns),
               "rows": [[v if isinstance(v, str) else float(v)
                         for v in row] for row in rows]}
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    lines = [f"# schema: {schema}",
             f"# config: {cfg.snapshot_json()}",
             ",".join(columns)]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else _fmt(v)
                              for v in row))
    return "\n".join(lines) + "\n"


def _summary_text(cfg: RunConfig, results: dict) -> str:
    doc = {"schema": SUMMARY_SCHEMA, "config": cfg.snapshot,
           "results": results}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _execute_single(cfg: RunConfig) -> tuple:
    """Run a non-scan preset; returns (timeseries, summary-results dict)."""
    params = cfg.params
    if cfg.preset == "reverse_transfer":
        res = run_reverse_transfer(params)
        ts = res["timeseries"]
        results = {"prep_fidelity_to_QS": res["prep_fidelity_to_QS"],
                   "final_rho_DD": res["final_rho_DD"],
                   "one_minus_rho_DD": 1.0 - res["final_rho_DD"]}
    elif cfg.preset == "partial_stirap":
        res = run_partial_stirap(params)
        ts = res["timeseries"]
        results = {"final_combination_fidelity":
                   res["final_combination_fidelity"],
                   "min_combination_fidelity": float(np.min(ts.fidelity))}
    elif cfg.preset == "optical_pumping_prep":
        res = run_optical_pumping_prep(params)
        ts = res["timeseries"]
        results = {"pump_time_us": res["pump_time"],
                   "final_rho_DD": res["final_rho_DD"]}
    else:
        res = run_full_transfer(params)
        ts = res["timeseries"]
        results = {"F_after_stirap": res["F_after_stirap"],
                   "one_minus_F": 1.0 - res["F_after_stirap"],
                   "P_Q_final": res["P_Q_final"]}
    results["invariant_maxima"] = {k: ts.stats[k] for k in
                                   ("hermiticity", "trace", "negativity")}
    results["integrator"] = {"n_steps": ts.stats["n_steps"],
                             "n_rejected": ts.stats["n_rejected"]}
    return ts, results


def execute(cfg: RunConfig, out_dir: str, fmt: str = "csv",
            workers: int = 1) -> dict:
    """Run one resolved config and write its output files."""
    os.makedirs(out_dir, exist_ok=True)
    stem = os.path.join(out_dir, cfg.output_stem)
    ext = "json" if fmt == "json" else "csv"
    t0 = time.perf_counter()

    if cfg.spec.axis_parameter is not None:
        scan = run_scan(cfg.spec, workers=workers)
        rows = [(scan.axis_values[i], scan.one_minus_f[i], scan.p_q[i],
                 scan.status[i]) for i in range(len(scan.axis_values))]
        _atomic_write(f"{stem}_scan.{ext}",
                      _tabular_text(SCAN_SCHEMA, cfg, SCAN_COLUMNS, rows, fmt))
        results = {
            "axis_parameter": scan.axis_parameter,
            "n_points": len(rows),
            "n_failed": sum(1 for s in scan.status if s != "ok"),
            "min_one_minus_F": float(np.nanmin(scan.one_minus_f)),
        }
        files = [f"{stem}_scan.{ext}"]
    else:
        ts, results = _execute_single(cfg)
        _atomic_write(f"{stem}_timeseries.{ext}",
                      _tabular_text(TIMESERIES_SCHEMA, cfg,
                                    TIMESERIES_COLUMNS,
                                    _timeseries_rows(ts), fmt))
        files = [f"{stem}_timeseries.{ext}"]

    _atomic_write(f"{stem}_summary.json", _summary_text(cfg, results))
    files.append(f"{stem}_summary.json")
    elapsed = time.perf_counter() - t0
    # Wall time goes to stdout only; result files stay reproducible.
    print(f"{cfg.output_stem}: wrote {', '.join(files)} "
          f"({elapsed:.1f} s wall)")
    for key, val in results.items():
        if isinstance(val, (int, float)):
            print(f"  {key} = {val:.6g}")
    return results


def _load(path: str, rtol: float | None) -> RunConfig:
    cfg = load_config(path)
    if rtol is not None:
        cfg = with_rtol(cfg, rtol)
    return cfg


def _preset_configs(name: str, rtol: float | None) -> list[RunConfig]:
    members = PRESET_GROUPS.get(name, (name,))
    configs = []
    for member in members:
        res = _preset_dir() / f"{member}.yaml"
        if not res.is_file():
            raise ParseError(f"unknown preset {name!r}; available: "
                             + ", ".join(list_preset_names()))
        configs.append(_load(str(res), rtol))
    return configs


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nstirap",
        description="Three-photon STIRAP simulator for the four-level "
                    "N scheme of a trapped alkaline-earth ion.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        if config_required:
            p.add_argument("--config", required=True, help="run config file")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--workers", type=int, default=os.cpu_count() or 1,
                       help="parallel scan workers (default: all cores)")
        p.add_argument("--rtol", type=float, default=None,
                       help="override integrator relative tolerance")
        p.add_argument("--seed", type=int, default=None,
                       help="reserved; the dynamics are deterministic")
        p.add_argument("--format", choices=("csv", "json"), default="csv",
                       help="tabular output format")

    common(sub.add_parser("run", help="execute a single-trajectory config"))
    common(sub.add_parser("scan", help="execute a parameter-scan config"))
    p_preset = sub.add_parser("preset", help="run a named built-in preset")
    p_preset.add_argument("name", help="preset name (see list-presets)")
    common(p_preset, config_required=False)
    p_val = sub.add_parser("validate",
                           help="check a config without running it")
    p_val.add_argument("--config", required=True)
    sub.add_parser("list-presets", help="list built-in preset names")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "list-presets":
            for name in list_preset_names():
                print(name)
            return 0
        if args.command == "validate":
            cfg = load_config(args.config)
            print(f"ok: {args.config} "
                  f"(preset {cfg.preset}, stem {cfg.output_stem})")
            return 0
        if args.command == "preset":
            for cfg in _preset_configs(args.name, args.rtol):
                execute(cfg, args.out, args.format, args.workers)
            return 0

        cfg = _load(args.config, args.rtol)
        is_scan = cfg.spec.axis_parameter is not None
        if args.command == "run" and is_scan:
            raise ValidationError(
                ["scenario.preset: this is a scan config; use `nstirap scan`"])
        if args.command == "scan" and not is_scan:
            raise ValidationError(
                ["scenario.scan: missing scan axis; use `nstirap run`"])
        execute(cfg, args.out, args.format, args.workers)
        return 0
    except (ParseError, ValidationError) as exc:
        _report_error("validation", exc)
        return 1
    except NStirapError as exc:
        _report_error("runtime", exc)
        return 2


def _report_error(kind: str, exc: Exception) -> None:
    record = {"error": kind, "type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ValidationError):
        record["problems"] = exc.problems
    print(json.dumps(record, sort_keys=True), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
