"""Run configuration: a strict TOML file with [curve] and [run] tables.

Unknown keys are rejected everywhere so that a typo in a curve parameter
fails loudly instead of silently running the default geometry.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib as _toml
else:
    import tomli as _toml

from .errors import ConfigError
from .geometry import (
    Circle,
    CurvilinearPolygon,
    Ellipse,
    FourierStar,
    GeneratingCurve,
    HolderStar,
    rounded_square,
)

_CURVE_KEYS = {
    "circle": {"center_height", "radius"},
    "ellipse": {"center_height", "semi_axis_x", "semi_axis_y"},
    "fourier_star": {"center_height", "base_radius", "cos_coeffs", "sin_coeffs"},
    "holder_star": {"center_height", "base_radius", "amplitude", "alpha"},
    "polygon": {"vertices", "grading"},
    "square": {"center_height", "half_width", "grading"},
}

_RUN_KEYS = {"n_list", "fit_window", "formats", "seed", "plots", "output_dir",
             "threads", "route", "quad_n"}
_CORNER_KEYS = {"bins", "margin", "zero_exclusion"}
_TOP_KEYS = {"curve", "run", "corners"}


@dataclass
class RunConfig:
    curve: GeneratingCurve
    n_list: list
    fit_window: tuple | None = None
    formats: tuple = ("csv", "json")
    seed: int = 0
    plots: bool = True
    output_dir: str | None = None
    threads: int = 1
    route: str = "auto"
    quad_n: int = 1024
    corners_bins: int = 20
    corners_margin: float = 0.02
    corners_zero_exclusion: float = 0.05
    raw: dict = field(default_factory=dict)


def _require_keys(table: dict, allowed: set, context: str) -> None:
    unknown = sorted(set(table) - allowed)
    if unknown:
        raise ConfigError(f"unknown key '{unknown[0]}' in [{context}]")


def build_curve(table: dict) -> GeneratingCurve:
    if "kind" not in table:
        raise ConfigError("missing key 'kind' in [curve]")
    kind = table["kind"]
    if kind not in _CURVE_KEYS:
        raise ConfigError(f"unknown curve kind '{kind}'")
    params = {k: v for k, v in table.items() if k != "kind"}
    _require_keys(params, _CURVE_KEYS[kind], "curve")
    try:
        if kind == "circle":
            return Circle(params["center_height"], params["radius"])
        if kind == "ellipse":
            return Ellipse(params["center_height"], params["semi_axis_x"],
                           params["semi_axis_y"])
        if kind == "fourier_star":
            return FourierStar(
                params["center_height"], params["base_radius"],
                cos_coeffs=params.get("cos_coeffs"),
                sin_coeffs=params.get("sin_coeffs"),
            )
        if kind == "holder_star":
            return HolderStar(params["center_height"], params["base_radius"],
                              params["amplitude"], params["alpha"])
        if kind == "polygon":
            return CurvilinearPolygon(params["vertices"],
                                      grading=params.get("grading", 3))
        return rounded_square(params.get("center_height", 2.0),
                              params.get("half_width", 0.8),
                              grading=params.get("grading", 3))
    except KeyError as exc:
        raise ConfigError(f"missing curve parameter {exc.args[0]!r}") from None


def _validate_n_list(values) -> list:
    if not isinstance(values, list) or not values:
        raise ConfigError("run.n_list must be a non-empty list")
    out = []
    for v in values:
        if not isinstance(v, int) or isinstance(v, bool):
            raise ConfigError(f"run.n_list entries must be integers, got {v!r}")
        if v < 8 or v % 2 != 0:
            raise ConfigError(f"run.n_list entries must be even and >= 8, got {v}")
        out.append(v)
    if out != sorted(out) or len(set(out)) != len(out):
        raise ConfigError("run.n_list must be strictly ascending")
    return out


def parse_config(path) -> RunConfig:
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            data = _toml.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except _toml.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}")
    return parse_config_dict(data)


def parse_config_dict(data: dict) -> RunConfig:
    _require_keys(data, _TOP_KEYS, "top level")
    if "curve" not in data:
        raise ConfigError("missing [curve] table")
    if "run" not in data:
        raise ConfigError("missing [run] table")
    curve = build_curve(data["curve"])
    run = data["run"]
    _require_keys(run, _RUN_KEYS, "run")
    n_list = _validate_n_list(run.get("n_list", [256]))

    fit_window = None
    if "fit_window" in run:
        fw = run["fit_window"]
        if (not isinstance(fw, list) or len(fw) != 2
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in fw)):
            raise ConfigError("run.fit_window must be a list of two integers")
        fit_window = (fw[0], fw[1])

    formats = run.get("formats", ["csv", "json"])
    if not isinstance(formats, list) or not set(formats) <= {"csv", "json"}:
        raise ConfigError("run.formats must be a subset of ['csv', 'json']")

    route = run.get("route", "auto")
    if route not in ("auto", "symmetrized", "direct"):
        raise ConfigError(f"run.route must be auto|symmetrized|direct, got {route!r}")

    corners_tab = data.get("corners", {})
    _require_keys(corners_tab, _CORNER_KEYS, "corners")

    seed = run.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ConfigError("run.seed must be an integer")

    threads = run.get("threads", 1)
    if not isinstance(threads, int) or threads < 1:
        raise ConfigError("run.threads must be a positive integer")

    return RunConfig(
        curve=curve,
        n_list=n_list,
        fit_window=fit_window,
        formats=tuple(formats),
        seed=seed,
        plots=bool(run.get("plots", True)),
        output_dir=run.get("output_dir"),
        threads=threads,
        route=route,
        quad_n=int(run.get("quad_n", 1024)),
        corners_bins=int(corners_tab.get("bins", 20)),
        corners_margin=float(corners_tab.get("margin", 0.02)),
        corners_zero_exclusion=float(corners_tab.get("zero_exclusion", 0.05)),
        raw=data,
    )
