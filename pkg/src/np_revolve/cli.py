"""Command-line entry point.

    np-revolve <command> --config <file.toml> [--out DIR] [--threads N]

Commands: spectrum, asymptotics, convergence, corners, kernels_dump, and
validate (which takes an output directory instead of a config).  Every
run writes a manifest.json echoing the configuration; all CSV/JSON
payloads are bit-reproducible, only the manifest timestamp varies.

Exit codes: 0 success, 2 configuration error, 3 geometry error,
4 numerical error.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
import scipy

from . import __version__, plots
from .asymptotics import build_report, default_fit_window
from .config import RunConfig, parse_config
from .corners import clustering_diagnostic, essential_bound
from .discretize import (
    KINDS,
    _AssemblyContext,
    assemble_mode0_parts,
    assemble_mode0_single_layer,
    dump_matrix,
    load_matrix,
)
from .errors import ConfigError, GeometryError, NPRevolveError, NumericalError
from .geometry import sample_curve
from .report import read_csv, read_json, write_csv, write_json
from .spectral import SpectrumResult, compute_spectrum

COMMANDS = ("spectrum", "asymptotics", "convergence", "corners", "kernels_dump")


def _spectra_for(cfg: RunConfig, n_values) -> dict:
    """Spectra per grid size, optionally computed in a thread pool."""
    if cfg.threads > 1 and len(n_values) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            futs = {n: pool.submit(compute_spectrum, cfg.curve, n, cfg.route)
                    for n in n_values}
            return {n: f.result() for n, f in futs.items()}
    return {n: compute_spectrum(cfg.curve, n, cfg.route) for n in n_values}


def _write_spectrum_files(out: Path, cfg: RunConfig, spec: SpectrumResult,
                          suffix: str = "") -> list:
    written = []
    if "csv" in cfg.formats:
        name = f"eigenvalues{suffix}.csv"
        rows = [(j + 1, abs(v), 1 if v > 0 else -1)
                for j, v in enumerate(spec.all_eigs)]
        write_csv(out / name, ["j", "rho_abs", "sign"], rows)
        written.append(name)
    if "json" in cfg.formats:
        name = f"spectrum{suffix}.json"
        write_json(out / name, spec.to_dict())
        written.append(name)
    return written


def _plot(out: Path, cfg: RunConfig, fn, *args) -> list:
    if not cfg.plots:
        return []
    name = args[-1]
    fn(*args[:-1], out / name)
    return [name]


def cmd_spectrum(cfg: RunConfig, out: Path) -> list:
    n = cfg.n_list[-1]
    spec = compute_spectrum(cfg.curve, n, cfg.route)
    written = _write_spectrum_files(out, cfg, spec)
    written += _plot(out, cfg, plots.plot_spectrum, spec, "spectrum.png")
    written += _plot(out, cfg, plots.plot_curve, sample_curve(cfg.curve, min(n, 512)),
                     "curve.png")
    return written


def cmd_asymptotics(cfg: RunConfig, out: Path) -> list:
    n = cfg.n_list[-1]
    spec = compute_spectrum(cfg.curve, n, cfg.route)
    window = cfg.fit_window or default_fit_window(n)
    report = build_report(cfg.curve, spec, window, quad_n=cfg.quad_n)
    written = _write_spectrum_files(out, cfg, spec)
    if "json" in cfg.formats:
        write_json(out / "asymptotics.json", report.to_dict())
        written.append("asymptotics.json")
    if "csv" in cfg.formats:
        m = min(len(spec.pos_eigs), len(spec.neg_eigs))
        j = np.arange(1, m + 1)
        rows = zip(j, spec.pos_eigs[:m], j * spec.pos_eigs[:m],
                   spec.neg_eigs[:m], j * spec.neg_eigs[:m])
        write_csv(out / "weyl_fit.csv",
                  ["j", "rho_plus", "j_rho_plus", "rho_minus", "j_rho_minus"], rows)
        written.append("weyl_fit.csv")
    written += _plot(out, cfg, plots.plot_weyl_fit, spec, report, "weyl_fit.png")
    written += _plot(out, cfg, plots.plot_spectrum, spec, "spectrum.png")
    return written


def cmd_convergence(cfg: RunConfig, out: Path) -> list:
    if len(cfg.n_list) < 2:
        raise ConfigError("convergence needs at least two entries in run.n_list")
    spectra = _spectra_for(cfg, cfg.n_list)
    written = []
    for n, spec in sorted(spectra.items()):
        written += _write_spectrum_files(out, cfg, spec, suffix=f"_n{n}")
    ordered = [spectra[n] for n in cfg.n_list]
    max_rank = min(40, *(len(s.all_eigs) for s in ordered))
    deltas = {}
    for a, b in zip(ordered[:-1], ordered[1:]):
        d = np.abs(np.abs(a.all_eigs[:max_rank]) - np.abs(b.all_eigs[:max_rank]))
        deltas[f"{a.n}->{b.n}"] = float(np.max(d))
    if "csv" in cfg.formats:
        rows = []
        for j in range(max_rank):
            rows.append([j + 1] + [abs(spectra[n].all_eigs[j]) for n in cfg.n_list])
        write_csv(out / "convergence.csv",
                  ["j"] + [f"rho_abs_n{n}" for n in cfg.n_list], rows)
        written.append("convergence.csv")
    if "json" in cfg.formats:
        write_json(out / "convergence.json", {
            "curve_id": cfg.curve.curve_id(),
            "n_list": cfg.n_list,
            "max_rank": max_rank,
            "max_abs_deltas": deltas,
        })
        written.append("convergence.json")
    written += _plot(out, cfg, plots.plot_convergence, ordered, "convergence.png")
    return written


def cmd_corners(cfg: RunConfig, out: Path) -> list:
    if len(cfg.n_list) < 3:
        raise ConfigError("corners needs at least three entries in run.n_list")
    angles = cfg.curve.corner_angles or (np.pi,)
    prediction = essential_bound(angles)
    spectra = _spectra_for(cfg, cfg.n_list)
    ordered = [spectra[n] for n in cfg.n_list]
    report = clustering_diagnostic(
        ordered, prediction, bins=cfg.corners_bins, margin=cfg.corners_margin,
        zero_exclusion=cfg.corners_zero_exclusion)
    written = []
    if "json" in cfg.formats:
        write_json(out / "corners.json", report.to_dict())
        written.append("corners.json")
    if "csv" in cfg.formats:
        rows = []
        if prediction.b > 0:
            for i in range(len(report.bin_edges) - 1):
                rows.append([report.bin_edges[i], report.bin_edges[i + 1]]
                            + [report.counts[k][i] for k in range(len(cfg.n_list))]
                            + [bool(report.bin_monotone[i])])
        write_csv(out / "clustering.csv",
                  ["bin_lo", "bin_hi"] + [f"count_n{n}" for n in cfg.n_list]
                  + ["monotone"], rows)
        written.append("clustering.csv")
    written += _plot(out, cfg, plots.plot_clustering, report, "corners.png")
    return written


def cmd_kernels_dump(cfg: RunConfig, out: Path) -> list:
    n = cfg.n_list[-1]
    samples = sample_curve(cfg.curve, n)
    ctx = _AssemblyContext(samples)
    parts = assemble_mode0_parts(samples, ctx)
    s0 = assemble_mode0_single_layer(samples, ctx)
    matrices = {
        "np_mode0": parts["mode0"],
        "single_layer_mode0": s0,
        "remainder": parts["remainder"],
        "np_planar": parts["planar"],
    }
    written = []
    for kind in KINDS:
        name = f"{kind}_n{n}.bin"
        dump_matrix(matrices[kind], out / name)
        written.append(name)
    return written


def cmd_validate(target: Path) -> int:
    """Re-parse every artifact in a run directory; exit 2 on any failure."""
    target = Path(target)
    if not target.is_dir():
        print(f"validate: {target} is not a directory", file=sys.stderr)
        return 2
    problems = []
    checked = 0
    for path in sorted(target.iterdir()):
        try:
            if path.suffix == ".json":
                read_json(path)
                checked += 1
            elif path.suffix == ".csv":
                header, rows = read_csv(path)
                for row in rows:
                    if len(row) != len(header):
                        raise ValueError(f"ragged row in {path.name}")
                checked += 1
            elif path.suffix == ".bin":
                load_matrix(path)
                checked += 1
            elif path.suffix == ".png":
                if path.read_bytes()[:8] != b"\x89PNG\r\n\x1a\n":
                    raise ValueError("bad PNG signature")
                checked += 1
        except Exception as exc:  # noqa: BLE001 - report and fail
            problems.append(f"{path.name}: {exc}")
    manifest = target / "manifest.json"
    if not manifest.exists():
        problems.append("manifest.json missing")
    for problem in problems:
        print(f"validate: {problem}", file=sys.stderr)
    if problems:
        return 2
    print(f"validate: {checked} artifacts OK in {target}")
    return 0


def _manifest(cfg: RunConfig, command: str, written: list, wall: float) -> dict:
    return {
        "command": command,
        "curve_id": cfg.curve.curve_id(),
        "config": cfg.raw,
        "versions": {
            "np_revolve": __version__,
            "python": sys.version.split()[0],
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
        "outputs": sorted(written),
        "timestamp": {
            "utc": _dt.datetime.now(_dt.timezone.utc).isoformat(),
            "wall_time_s": wall,
        },
    }


def run(command: str, cfg: RunConfig, out_dir) -> int:
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write_probe"
        probe.touch()
        probe.unlink()
    except OSError as exc:
        raise ConfigError(f"output directory not writable: {out} ({exc})") from None
    start = time.perf_counter()
    handler = {
        "spectrum": cmd_spectrum,
        "asymptotics": cmd_asymptotics,
        "convergence": cmd_convergence,
        "corners": cmd_corners,
        "kernels_dump": cmd_kernels_dump,
    }[command]
    written = handler(cfg, out)
    wall = time.perf_counter() - start
    write_json(out / "manifest.json", _manifest(cfg, command, written, wall))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="np-revolve",
        description="Axially symmetric NP spectra on surfaces of revolution",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="TOML run configuration")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--threads", type=int, default=None)
    v = sub.add_parser("validate")
    v.add_argument("path", help="run directory to validate")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "validate":
        return cmd_validate(Path(args.path))
    try:
        cfg = parse_config(args.config)
        if args.threads is not None:
            if args.threads < 1:
                raise ConfigError("--threads must be a positive integer")
            cfg.threads = args.threads
        out_dir = args.out or cfg.output_dir
        if out_dir is None:
            raise ConfigError("no output directory (set --out or run.output_dir)")
        return run(args.command, cfg, out_dir)
    except ConfigError as exc:
        print(f"np-revolve: config error: {exc}", file=sys.stderr)
        return 2
    except GeometryError as exc:
        print(f"np-revolve: geometry error: {exc}", file=sys.stderr)
        return 3
    except (NumericalError, NPRevolveError) as exc:
        print(f"np-revolve: numerical error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
