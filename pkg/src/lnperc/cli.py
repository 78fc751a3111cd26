"""Command-line entry point: ``lnperc {analytic,simulate,sweep,phase,degree}``.

Options come from a flat JSON config file (``--config``) overridden by
same-named flags.  Exit codes: 0 success, 1 runtime failure, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import analytics, io, montecarlo
from .params import KernelKind, ModelParams, ParameterError, WealthKind
from .rng import RNG_ALGORITHM

MODEL_KEYS = ("wealth", "kernel", "w0", "nbar", "c", "phi", "mu", "n_nodes")
COMMON_KEYS = ("seed", "out", "format", "threads")
COMMAND_KEYS = {
    "analytic": (),
    "simulate": ("instances", "generator"),
    "sweep": ("instances", "generator", "nbar_values"),
    "phase": ("phi_values", "c_values"),
    "degree": ("instances",),
}
DEFAULTS = {
    "wealth": "uniform",
    "kernel": "hard",
    "w0": 1.0,
    "nbar": 0.0,
    "c": 0.0,
    "phi": 1.0,
    "mu": 4.0,
    "n_nodes": 20_000,
    "seed": 0,
    "out": None,
    "threads": None,
    "instances": 10,
    "generator": "independent",
}
DEFAULT_FORMAT = {"analytic": "json", "simulate": "csv", "sweep": "csv", "phase": "csv", "degree": "json"}


class UsageError(Exception):
    pass


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise ValueError(text)
    return value


_u64.__name__ = "unsigned 64-bit integer"


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def parse_grid(value) -> list[float]:
    """A list of numbers, ``"a,b,c"`` or the linspace shorthand ``"start:stop:num"``."""
    if isinstance(value, (list, tuple)):
        return [float(v) for v in value]
    text = str(value).strip()
    if text.count(":") == 2:
        start, stop, num = text.split(":")
        return [float(v) for v in np.linspace(float(start), float(stop), int(num))]
    return [float(v) for v in text.split(",") if v.strip()]


def _grid(text: str) -> list[float]:
    try:
        return parse_grid(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid grid {text!r}") from None


def _add_flag(p: argparse.ArgumentParser, key: str, **kw):
    names = [f"--{key}"]
    if "_" in key:
        names.append(f"--{key.replace('_', '-')}")
    p.add_argument(*names, dest=key, default=argparse.SUPPRESS, **kw)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lnperc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for command, extra in COMMAND_KEYS.items():
        p = sub.add_parser(command)
        p.add_argument("--config", type=Path, default=None, help="flat JSON config file")
        _add_flag(p, "seed", type=_u64)
        _add_flag(p, "out", type=Path)
        _add_flag(p, "format", choices=("csv", "json"))
        _add_flag(p, "threads", type=_positive_int)
        _add_flag(p, "wealth", choices=[k.value for k in WealthKind])
        _add_flag(p, "kernel", choices=[k.value for k in KernelKind])
        for key in ("w0", "nbar", "c", "phi", "mu"):
            _add_flag(p, key, type=float)
        _add_flag(p, "n_nodes", type=int)
        if "instances" in extra:
            _add_flag(p, "instances", type=int)
        if "generator" in extra:
            _add_flag(p, "generator", choices=montecarlo.GENERATORS)
        for key in ("nbar_values", "phi_values", "c_values"):
            if key in extra:
                _add_flag(p, key, type=_grid)
    return parser


def load_config(path: Path, command: str) -> dict:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise UsageError(f"config {path}: top level must be an object")
    allowed = set(MODEL_KEYS) | set(COMMON_KEYS) | set(COMMAND_KEYS[command])
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise UsageError(f"config {path}: unknown key(s) for '{command}': {', '.join(unknown)}")
    return data


def resolve(command: str, args: argparse.Namespace) -> dict:
    """Merge defaults, config file and flags (flags win) into one flat dict."""
    keys = MODEL_KEYS + COMMON_KEYS + COMMAND_KEYS[command]
    cfg = {k: DEFAULTS.get(k) for k in keys}
    cfg["format"] = DEFAULT_FORMAT[command]
    if args.config is not None:
        cfg.update(load_config(args.config, command))
    cfg.update({k: v for k, v in vars(args).items() if k in keys})
    for key in ("nbar_values", "phi_values", "c_values"):
        if key in keys:
            if cfg.get(key) is None:
                raise UsageError(f"--{key.replace('_', '-')} is required for '{command}'")
            try:
                cfg[key] = parse_grid(cfg[key])
            except ValueError:
                raise UsageError(f"{key}: invalid grid {cfg[key]!r}") from None
    if "instances" in keys and (not isinstance(cfg["instances"], int) or cfg["instances"] < 1):
        raise UsageError(f"instances: must be an integer >= 1, got {cfg['instances']!r}")
    if not isinstance(cfg["seed"], int) or not 0 <= cfg["seed"] < 2**64:
        raise UsageError(f"seed: must be an unsigned 64-bit integer, got {cfg['seed']!r}")
    if cfg["format"] not in ("csv", "json"):
        raise UsageError(f"format: must be csv or json, got {cfg['format']!r}")
    if cfg["out"] is not None:
        cfg["out"] = str(cfg["out"])
    return cfg


def model_params(cfg: dict) -> ModelParams:
    return ModelParams(
        w0=cfg["w0"],
        nbar=cfg["nbar"],
        c=cfg["c"],
        phi=cfg["phi"],
        mu=cfg["mu"],
        n_nodes=cfg["n_nodes"],
        wealth_kind=cfg["wealth"],
        kernel_kind=cfg["kernel"],
    )


def _workers(cfg: dict) -> int:
    return cfg["threads"] or montecarlo.default_workers()


def _meta(command: str, cfg: dict) -> dict:
    recorded = {k: v for k, v in cfg.items() if k not in ("out", "threads")}
    return {"command": command, "config": recorded, "rng": RNG_ALGORITHM}


def _table_csv(rows: list[dict], meta: dict) -> str:
    columns = montecarlo.SweepTable.COLUMNS
    return io.dumps_csv(columns, [[r[c] for c in columns] for r in rows], meta)


def render(command: str, cfg: dict) -> tuple[str, str]:
    """Run ``command`` and return ``(document, summary)``."""
    params = model_params(cfg)
    meta = _meta(command, cfg)
    fmt = cfg["format"]
    if command == "analytic":
        rep = analytics.analytic_report(params)
        t = "diverged" if rep.diverged else repr(rep.mean_component_size)
        summary = (f"f_plus={rep.f_plus!r} S={rep.giant_fraction!r} "
                   f"mean_component_size={t} supercritical={str(rep.supercritical).lower()}")
        data = rep.to_dict()
        if fmt == "csv":
            return io.dumps_csv(list(data), [list(data.values())], meta), summary
        return io.dumps_json({**meta, "data": data}), summary
    if command == "simulate":
        res = montecarlo.run_ensemble(params, cfg["instances"], cfg["seed"],
                                      generator_kind=cfg["generator"], workers=_workers(cfg))
        summary = f"mean_S={res.mean_S!r} stderr_S={res.stderr_S!r} analytic_S={res.analytic.giant_fraction!r}"
        if fmt == "csv":
            return _table_csv([res.table_row()], meta), summary
        return io.dumps_json({**meta, "data": res.to_dict()}), summary
    if command == "sweep":
        table = montecarlo.sweep_nbar(params, cfg["nbar_values"], cfg["instances"], cfg["seed"],
                                      generator_kind=cfg["generator"], workers=_workers(cfg))
        onset = table.onset()
        summary = f"rows={len(table.rows)} onset_nbar={onset.params.nbar if onset else None!r}"
        if fmt == "csv":
            return _table_csv(table.table(), meta), summary
        return io.dumps_json({**meta, "data": table.to_dict()}), summary
    if command == "phase":
        grid = analytics.phase_diagram(cfg["phi_values"], cfg["c_values"], params)
        regions = grid.regions()
        summary = f"cells={regions.size} zero={int((regions == 1).sum())} finite={int((regions == 2).sum())}"
        if fmt == "csv":
            return io.phase_grid_csv(grid, meta), summary
        return io.dumps_json({**meta, "data": grid.to_dict()}), summary
    if command == "degree":
        cmp = montecarlo.degree_comparison(params, cfg["instances"], cfg["seed"], workers=_workers(cfg))
        summary = " ".join(f"tv_{f.generator}={f.tv_distance!r}" for f in cmp.fits)
        if fmt == "csv":
            kmax = max(max(f.histogram) for f in cmp.fits)
            ks = range(kmax + 1)
            pmf = analytics.degree_pmf(np.arange(kmax + 1), cmp.f_plus, params.mu)
            columns = ["k", "pmf", *(f"empirical_{f.generator}" for f in cmp.fits)]
            rows = [[k, float(pmf[k]), *(f.histogram.get(k, 0) / f.n_samples for f in cmp.fits)] for k in ks]
            return io.dumps_csv(columns, rows, meta), summary
        return io.dumps_json({**meta, "data": cmp.to_dict()}), summary
    raise UsageError(f"unknown command {command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args.command, args)
        document, summary = render(args.command, cfg)
    except (UsageError, ParameterError) as exc:
        print(f"lnperc {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        print(f"lnperc {args.command}: failed: {exc}", file=sys.stderr)
        return 1
    if cfg["out"] is None:
        sys.stdout.write(document)
    else:
        Path(cfg["out"]).write_text(document, encoding="utf-8")
        print(summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
