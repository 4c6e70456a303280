"""Command-line front end.

    bousswave check  --config run.json
    bousswave solve  --config run.json --out results/
    bousswave sweep  --config run.json --out results/
    bousswave symbol-eval "sqrt(tanh(k)/k)" 0.5

Exit codes: 0 success, 1 numerical or assumption failure, 2 usage or
configuration error. Errors are written to stderr as one JSON object.
"""
import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import _validation as val
from .assumptions import check_assumptions
from .dsl import compile_symbol, parse_symbol, to_text
from .errors import (
    AbcdConditionViolated,
    BousswaveError,
    ConfigError,
    InsufficientData,
    ParseError,
    SweepFailed,
    UnknownIdentifier,
    UnknownModel,
)
from .models import MODEL_KEYS, make_abcd, spec_from_config
from .postprocess import (
    _jsonable,
    physical_residual,
    rate_fit,
    reconstruct_eta,
    unscale,
    write_json,
    write_profile_csv,
    write_sweep_csv,
)
from .solver import SolveConfig, continuation_sweep, kdv_profile, newton_solve
from .spectral import write_coeffs_csv, write_field_csv

log = logging.getLogger("bousswave")

WORKERS_ENV = "BOUSSWAVE_WORKERS"
FORMATS = ("csv", "json")
_SECTIONS = {
    "grid": {"L": 50.0, "N": 1024},
    "solve": {"s": 1.0, "eps": None, "eps_list": None, "newton_tol": 1e-11, "max_iter": 25,
              "tail_tol": 1e-8},
    "check": {"xi1": None, "xi_max": 1e4, "samples": 4000},
    "output": {"dir": "output", "formats": list(FORMATS)},
}
_USAGE_ERRORS = (ConfigError, ParseError, UnknownIdentifier, UnknownModel, InsufficientData)


@dataclass
class RunConfig:
    model: dict
    grid: dict = field(default_factory=lambda: dict(_SECTIONS["grid"]))
    solve: dict = field(default_factory=lambda: dict(_SECTIONS["solve"]))
    check: dict = field(default_factory=lambda: dict(_SECTIONS["check"]))
    output: dict = field(default_factory=lambda: dict(_SECTIONS["output"]))

    @classmethod
    def from_dict(cls, doc):
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(doc) - MODEL_KEYS - set(_SECTIONS)
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        model = {k: v for k, v in doc.items() if k in MODEL_KEYS}
        if "model" not in model:
            raise ConfigError("missing 'model'")
        sections = {}
        for name, defaults in _SECTIONS.items():
            block = doc.get(name, {})
            if not isinstance(block, dict):
                raise ConfigError(f"'{name}' must be an object")
            extra = set(block) - set(defaults)
            if extra:
                raise ConfigError(f"unknown keys {sorted(extra)} in '{name}'")
            sections[name] = {**defaults, **block}
        cfg = cls(model, **sections)
        cfg._validate()
        return cfg

    @classmethod
    def load(cls, path):
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path!s}: {exc.strerror}") from None
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.pos, f"valid JSON ({exc.msg})", str(path)) from None
        return cls.from_dict(doc)

    def _validate(self):
        val.check_grid_params(self.grid["L"], self.grid["N"])
        s = self.solve["s"]
        if isinstance(s, bool) or not isinstance(s, (int, float)) or s < 1:
            raise ConfigError(f"solve.s must be a number >= 1, got {s!r}")
        val.check_positive(self.solve["newton_tol"], "solve.newton_tol")
        val.check_positive(self.solve["max_iter"], "solve.max_iter", integer=True)
        val.check_positive(self.solve["tail_tol"], "solve.tail_tol")
        if self.check["xi1"] is not None:
            val.check_positive(self.check["xi1"], "check.xi1")
        val.check_positive(self.check["xi_max"], "check.xi_max")
        val.check_positive(self.check["samples"], "check.samples", integer=True)
        formats = self.output["formats"]
        if not isinstance(formats, list) or set(formats) - set(FORMATS):
            raise ConfigError(f"output.formats must be a subset of {list(FORMATS)}")

    def solve_config(self):
        sv = self.solve
        return SolveConfig(s=float(sv["s"]), L=float(self.grid["L"]), N=int(self.grid["N"]),
                           newton_tol=float(sv["newton_tol"]), max_iter=int(sv["max_iter"]),
                           tail_tol=float(sv["tail_tol"]))

    def spec(self):
        return spec_from_config(self.model)

    def out_dir(self):
        path = Path(self.output["dir"])
        path.mkdir(parents=True, exist_ok=True)
        return path

    def wants(self, fmt):
        return fmt in self.output["formats"]


def _emit(data, stream=None):
    stream = stream or sys.stdout
    json.dump(_jsonable(data), stream, indent=2, sort_keys=True)
    stream.write("\n")


def _fail(exc, code):
    data = exc.to_dict() if isinstance(exc, BousswaveError) else {
        "error": type(exc).__name__, "message": str(exc)}
    _emit(data, sys.stderr)
    return code


def cmd_check(config):
    cfg = config
    kw = dict(xi1=cfg.check["xi1"], xi_max=float(cfg.check["xi_max"]),
              samples=int(cfg.check["samples"]))
    try:
        spec = cfg.spec()
        violation = None
    except AbcdConditionViolated as exc:
        violation = exc
        m = cfg.model
        spec = make_abcd(m["a"], m["b"], m["c"], m["d"], validate=False)
    report = check_assumptions(spec, **kw)
    if violation is not None:
        report.notes.insert(0, str(violation))
    _emit({"assumption_report": report.to_dict()})
    if cfg.wants("json") and cfg.output.get("dir"):
        write_json(cfg.out_dir() / "assumption_report.json", report.to_dict())
    return 0 if report.ok and violation is None else 1


def _result_row(spec, result, s):
    r1, r2 = physical_residual(spec, result, s)
    row = result.summary()
    row.update(r1=r1, r2=r2)
    return row


def cmd_solve(config):
    cfg = config
    if cfg.solve["eps"] is None:
        raise ConfigError("solve.eps is required for the solve command")
    eps = val.check_eps(cfg.solve["eps"], "solve.eps")
    spec = cfg.spec()
    sc = cfg.solve_config()
    result = newton_solve(spec, eps, None, sc)
    row = _result_row(spec, result, sc.s)
    out = cfg.out_dir()
    if cfg.wants("csv"):
        v = unscale(result.V, eps)
        eta = reconstruct_eta(spec.K[2], spec.K[3], v, result.omega) if spec.K else None
        write_profile_csv(out / "profile.csv", v, eta)
        write_field_csv(out / "rescaled_profile.csv", result.V)
        write_coeffs_csv(out / "rescaled_coeffs.csv", result.V)
    if cfg.wants("json"):
        write_json(out / "result.json", row)
    _emit(row)
    return 0


def _workers():
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"{WORKERS_ENV} must be >= 1")
    return n


def cmd_sweep(config):
    cfg = config
    if cfg.solve["eps_list"] is None:
        raise ConfigError("solve.eps_list is required for the sweep command")
    eps_list = val.check_eps_list(cfg.solve["eps_list"])
    if len(eps_list) < 3:
        raise InsufficientData(f"a rate fit needs at least 3 distinct eps, got {len(eps_list)}")
    workers = _workers()
    spec = cfg.spec()
    sc = cfg.solve_config()
    out = cfg.out_dir()
    try:
        results = continuation_sweep(spec, eps_list, sc, warm_start=workers == 1,
                                     workers=workers)
    except SweepFailed as exc:
        if cfg.wants("csv"):
            write_sweep_csv(out / "sweep.csv", [_result_row(spec, r, sc.s) for r in exc.results])
        return _fail(exc, 1)
    rows = [_result_row(spec, r, sc.s) for r in results]
    report = check_assumptions(spec, xi1=cfg.check["xi1"], xi_max=float(cfg.check["xi_max"]),
                               samples=int(cfg.check["samples"]))
    sigma = kdv_profile(spec.gamma, sc.grid())
    study = rate_fit(results, sigma, sc.s, report)
    if cfg.wants("csv"):
        write_sweep_csv(out / "sweep.csv", rows)
    if cfg.wants("json"):
        write_json(out / "rate.json", study.to_dict())
    _emit({"rate": study.to_dict(), "sweep": rows})
    return 0 if study.fitted_slope >= 1.0 else 1


def cmd_symbol_eval(expr, xi):
    try:
        xi = float(xi)
    except ValueError:
        raise ConfigError(f"xi must be a number, got {xi!r}") from None
    parsed = parse_symbol(expr)
    sym = compile_symbol(parsed)
    _emit({"expr": to_text(parsed.ast), "xi": xi, "value": float(sym(xi))})
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="bousswave", description="Solitary waves of "
                                "Fourier-multiplier Boussinesq systems.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in (("check", "verify structural assumptions"),
                           ("solve", "solve at a single eps"),
                           ("sweep", "continuation sweep and rate fit")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--config", required=True, help="JSON run configuration")
        sp.add_argument("--out", help="output directory (overrides output.dir)")
    se = sub.add_parser("symbol-eval", help="evaluate a symbol expression")
    se.add_argument("expr")
    se.add_argument("xi")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        if args.command == "symbol-eval":
            return cmd_symbol_eval(args.expr, args.xi)
        cfg = RunConfig.load(args.config)
        if args.out:
            cfg.output["dir"] = args.out
        return {"check": cmd_check, "solve": cmd_solve, "sweep": cmd_sweep}[args.command](cfg)
    except _USAGE_ERRORS as exc:
        return _fail(exc, 2)
    except BousswaveError as exc:
        return _fail(exc, 1)
    except (ValueError, ArithmeticError) as exc:
        return _fail(exc, 1)


if __name__ == "__main__":
    sys.exit(main())
