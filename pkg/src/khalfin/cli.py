"""Command-line front end.

Subcommands: amplitude | hamiltonian | crossover | redshift.  Parameters
come from an optional JSON config document; every flag overrides the
corresponding config field.  Output is CSV (comma separator, '.'
decimal, mandatory header) or JSON ({"meta": ..., "rows": ...}), with
shortest-round-trip float formatting so repeated runs are byte
identical.

Exit status: 0 success, 2 configuration/validation error, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .crossover import APPROX_VALIDITY_X, solve_crossover
from .density import NormalizedDensity, ResonanceParams
from .effham import effective_hamiltonian, effective_hamiltonian_fd
from .errors import CatalogError, ConfigError, DomainError, KhalfinError
from .numerics import QuadratureSpec
from .redshift import DopplerFrame, load_catalog, observed_line_table
from .survival import (
    Route,
    amplitude_asymptotic,
    amplitude_closed_form,
    amplitude_quadrature,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


@dataclass
class RunConfig:
    e_min: float = 0.0
    e0: Optional[float] = None
    gamma0: float = 1.0
    hbar: float = 1.0
    x: Optional[float] = None
    t_start: float = 0.01
    t_stop: float = 1000.0
    points: int = 200
    log_spacing: bool = True
    beta: float = 0.0
    catalog_path: Optional[str] = None
    out_format: str = "csv"
    out_path: Optional[str] = None
    routes: tuple = (Route.CLOSED_FORM.value,)
    fd_check: bool = False
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)

    def validate(self):
        if self.points < 2:
            raise ConfigError("points must be >= 2")
        if not self.t_start < self.t_stop:
            raise ConfigError("t_start must be < t_stop")
        if self.out_format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        for r in self.routes:
            if r not in {v.value for v in Route}:
                raise ConfigError(f"unknown route {r!r}")

    def model(self) -> ResonanceParams:
        e0 = self.e0
        if e0 is None:
            x = 100.0 if self.x is None else self.x
            e0 = self.e_min + x * self.gamma0
        elif self.x is not None:
            raise ConfigError("give either e0 or x, not both")
        try:
            return ResonanceParams(e_min=self.e_min, e0=e0,
                                   gamma0=self.gamma0, hbar=self.hbar)
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc

    def time_grid(self):
        if self.log_spacing:
            if self.t_start <= 0:
                raise ConfigError("log spacing requires t_start > 0")
            return np.geomspace(self.t_start, self.t_stop, self.points)
        return np.linspace(self.t_start, self.t_stop, self.points)

    def meta(self) -> dict:
        m = {k: getattr(self, k) for k in (
            "e_min", "e0", "gamma0", "hbar", "x", "t_start", "t_stop",
            "points", "log_spacing", "beta", "catalog_path", "out_format",
        )}
        m["routes"] = list(self.routes)
        m["version"] = __version__
        return m


def _load_config(path: Optional[str]) -> RunConfig:
    cfg = RunConfig()
    if path is None:
        return cfg
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    model = doc.get("model", {})
    for key in ("e_min", "e0", "gamma0", "hbar", "x"):
        if key in model:
            setattr(cfg, key, model[key])
    sweep = doc.get("sweep", {})
    if "t_start" in sweep:
        cfg.t_start = sweep["t_start"]
    if "t_stop" in sweep:
        cfg.t_stop = sweep["t_stop"]
    if "points" in sweep:
        cfg.points = sweep["points"]
    if "spacing" in sweep:
        if sweep["spacing"] not in ("linear", "log"):
            raise ConfigError("spacing must be 'linear' or 'log'")
        cfg.log_spacing = sweep["spacing"] == "log"
    outputs = doc.get("outputs", {})
    if "format" in outputs:
        cfg.out_format = outputs["format"]
    if "path" in outputs:
        cfg.out_path = outputs["path"]
    tol = doc.get("tolerances", {})
    if tol:
        cfg.quadrature = QuadratureSpec(
            rel_tol=tol.get("rel_tol", 1e-10),
            abs_tol=tol.get("abs_tol", 1e-12),
            max_subdivisions=tol.get("max_subdivisions", 200_000),
            tail_truncation_multiplier=tol.get("tail_truncation_multiplier", 16.0),
        )
    if "catalog_path" in doc:
        cfg.catalog_path = doc["catalog_path"]
    if "routes" in doc:
        cfg.routes = tuple(doc["routes"])
    return cfg


def _fmt(v) -> str:
    """Stable scalar formatting: shortest round-trip floats."""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _emit(rows, header, cfg: RunConfig):
    if cfg.out_format == "csv":
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(_fmt(row[k]) for k in header))
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps({"meta": cfg.meta(), "rows": rows}, indent=2,
                          sort_keys=True) + "\n"
    if cfg.out_path:
        with open(cfg.out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


_AMPLITUDE_HEADER = ["t", "re_a", "im_a", "abs_a", "p_t", "route", "est_error"]


def cmd_amplitude(cfg: RunConfig) -> int:
    cfg.validate()
    d = NormalizedDensity.from_params(cfg.model())
    rows = []
    for t in cfg.time_grid():
        t = float(t)
        for route in cfg.routes:
            if route == Route.CLOSED_FORM.value:
                s = amplitude_closed_form(d, t)
            elif route == Route.QUADRATURE.value:
                s = amplitude_quadrature(d, t, cfg.quadrature)
            else:
                s = amplitude_asymptotic(d, t, order=2)
            rows.append({
                "t": t,
                "re_a": s.value.real,
                "im_a": s.value.imag,
                "abs_a": abs(s.value),
                "p_t": s.p,
                "route": s.route.value,
                "est_error": s.est_error,
            })
    _emit(rows, _AMPLITUDE_HEADER, cfg)
    return EXIT_OK


_HAMILTONIAN_HEADER = ["t", "re_h", "im_h", "energy", "rate", "route",
                       "conditioning_flag"]


def cmd_hamiltonian(cfg: RunConfig) -> int:
    cfg.validate()
    d = NormalizedDensity.from_params(cfg.model())
    header = list(_HAMILTONIAN_HEADER)
    if cfg.fd_check:
        header += ["fd_re_h", "fd_im_h", "fd_rel_diff"]
    rows = []
    for t in cfg.time_grid():
        t = float(t)
        s = effective_hamiltonian(d, t)
        row = {
            "t": t,
            "re_h": s.h.real,
            "im_h": s.h.imag,
            "energy": s.energy,
            "rate": s.rate,
            "route": s.route.value,
            "conditioning_flag": int(s.ill_conditioned),
        }
        if cfg.fd_check:
            fd = effective_hamiltonian_fd(d, t)
            diff = abs(fd.h - s.h) / max(abs(s.h), 1e-300)
            row["fd_re_h"] = fd.h.real
            row["fd_im_h"] = fd.h.imag
            row["fd_rel_diff"] = diff
            if not s.ill_conditioned and diff > 1e-5:
                raise KhalfinError(
                    f"finite-difference cross-check failed at t={t:g}: "
                    f"relative difference {diff:g}"
                )
        rows.append(row)
    _emit(rows, header, cfg)
    return EXIT_OK


_CROSSOVER_HEADER = ["x", "s_exact_small", "s_exact_large", "s_paper_approx",
                     "residual", "a_coefficient", "approx_rel_gap",
                     "approx_validity_warning"]


def cmd_crossover(cfg: RunConfig) -> int:
    cfg.validate()
    d = NormalizedDensity.from_params(cfg.model())
    res = solve_crossover(d)
    x = d.params.x
    warn = x <= APPROX_VALIDITY_X
    if warn:
        print(
            f"warning: crossover approximation is quoted for x > "
            f"{APPROX_VALIDITY_X:g}; got x = {x:g}", file=sys.stderr,
        )
    row = {
        "x": x,
        "s_exact_small": res.s_exact_small,
        "s_exact_large": res.s_exact_large,
        "s_paper_approx": res.s_paper_approx,
        "residual": res.residual,
        "a_coefficient": res.a_coefficient,
        # the logarithmic approximation systematically overshoots the
        # exact root at moderate x; report the gap rather than hide it
        "approx_rel_gap": (res.s_paper_approx - res.s_exact_large)
        / res.s_exact_large,
        "approx_validity_warning": int(warn),
    }
    _emit([row], _CROSSOVER_HEADER, cfg)
    return EXIT_OK


_REDSHIFT_HEADER = ["id", "e0", "e_inf", "e0_obs", "e_inf_obs",
                    "delta_pair_check"]


def cmd_redshift(cfg: RunConfig, t_override: Optional[float]) -> int:
    cfg.validate()
    if cfg.catalog_path is None:
        raise ConfigError("redshift requires a line catalog (--catalog)")
    try:
        catalog = load_catalog(cfg.catalog_path, default_e_min=cfg.e_min,
                               hbar=cfg.hbar)
    except OSError as exc:
        raise ConfigError(f"cannot read catalog: {exc}") from exc
    frame = DopplerFrame(beta=cfg.beta)
    if t_override is not None:
        t = t_override
    else:
        # default evaluation age: comfortably past every line's crossover
        from .redshift import crossover_time
        t = 50.0 * max(crossover_time(ln) for ln in catalog.resolved())
    rows = observed_line_table(catalog, frame, t)
    _emit(rows, _REDSHIFT_HEADER, cfg)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="khalfin",
        description="Long-time survival amplitude, effective Hamiltonian, "
                    "crossover time and spectral-line observables of the "
                    "truncated Breit-Wigner model.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("amplitude", "hamiltonian", "crossover", "redshift"):
        p = sub.add_parser(name)
        p.add_argument("--config", type=str, default=None)
        p.add_argument("--x", type=float, default=None)
        p.add_argument("--gamma0", type=float, default=None)
        p.add_argument("--e0", type=float, default=None)
        p.add_argument("--emin", type=float, default=None)
        p.add_argument("--hbar", type=float, default=None)
        p.add_argument("--t-start", type=float, default=None)
        p.add_argument("--t-stop", type=float, default=None)
        p.add_argument("--points", type=int, default=None)
        p.add_argument("--log-spacing", action="store_true", default=None)
        p.add_argument("--linear-spacing", action="store_true", default=None)
        p.add_argument("--beta", type=float, default=None)
        p.add_argument("--catalog", type=str, default=None)
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--out", type=str, default=None)
        if name == "amplitude":
            p.add_argument("--routes", type=str, default=None,
                           help="comma-separated: closed_form,quadrature,asymptotic")
        if name == "hamiltonian":
            p.add_argument("--fd-check", action="store_true")
    return parser


def _apply_overrides(cfg: RunConfig, args: argparse.Namespace) -> RunConfig:
    mapping = {
        "x": "x", "gamma0": "gamma0", "e0": "e0", "emin": "e_min",
        "hbar": "hbar", "t_start": "t_start", "t_stop": "t_stop",
        "points": "points", "beta": "beta", "catalog": "catalog_path",
        "format": "out_format", "out": "out_path",
    }
    for arg_name, cfg_name in mapping.items():
        v = getattr(args, arg_name, None)
        if v is not None:
            setattr(cfg, cfg_name, v)
    if getattr(args, "log_spacing", None):
        cfg.log_spacing = True
    if getattr(args, "linear_spacing", None):
        cfg.log_spacing = False
    routes = getattr(args, "routes", None)
    if routes is not None:
        cfg.routes = tuple(r.strip() for r in routes.split(",") if r.strip())
    if getattr(args, "fd_check", False):
        cfg.fd_check = True
    return cfg


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        cfg = _apply_overrides(_load_config(args.config), args)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            if args.command == "amplitude":
                return cmd_amplitude(cfg)
            if args.command == "hamiltonian":
                return cmd_hamiltonian(cfg)
            if args.command == "crossover":
                return cmd_crossover(cfg)
            return cmd_redshift(cfg, t_override=getattr(args, "t_stop", None))
    except (ConfigError, CatalogError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (KhalfinError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
