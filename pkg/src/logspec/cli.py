"""Command-line front end.

Experiments are described by flat INI configs with sections [run],
[potential], [grid], [model], [params]; outputs are spectrum CSVs and flat
key/value report records, both byte-identical across repeated runs of the
same config.

    logspec --config experiment.ini [--out PATH] [--set section.key=value ...]

Commands: solve, fock, hagedorn, law, fit, pair, verify-shift, reproduce.
``reproduce`` chains the built-in end-to-end checks (prime-oscillator
bijection, solver oracles, exponent laws, logarithmic shift identity) into
one summary report and exits 0 only if every claim passes.
"""

from __future__ import annotations

import argparse
import configparser
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import asymptotics, fock, psusy, schrodinger
from .potentials import FULL_LINE, LOGARITHMIC, POWER_LAW, TABULATED, PotentialSpec, describe
from .spectrum import Spectrum

COMMANDS = ("solve", "fock", "hagedorn", "law", "fit", "pair", "verify-shift", "reproduce")
FORMATS = ("csv", "report")

_SCHEMA = {
    "run": {"command", "out", "format"},
    "potential": {"kind", "g", "r", "epsilon0", "x0", "hbar", "mass", "domain",
                  "offset", "x_table", "v_table"},
    "grid": {"x_min", "x_max", "points", "rel_tol"},
    "model": {"epsilon0", "n_max", "shift_integer"},
    "params": {"count", "beta", "k", "window_lo", "window_hi", "tolerance", "form",
               "r_values", "input", "input_a", "input_b"},
}


class ConfigError(ValueError):
    """Invalid or incomplete experiment configuration."""


@dataclass
class ExperimentConfig:
    command: str
    potential: PotentialSpec | None = None
    grid: schrodinger.GridConfig | None = None
    grid_rel_tol: float = schrodinger.DEFAULT_GRID_RTOL
    model: fock.PrimeOscillatorModel | None = None
    shift_integer: int | None = None
    params: dict = field(default_factory=dict)
    out: Path | None = None
    format: str = "csv"
    sections: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------

def _typed(section: str, key: str, raw: str, kind):
    try:
        if kind is bool:
            if raw.lower() in ("true", "1", "yes"):
                return True
            if raw.lower() in ("false", "0", "no"):
                return False
            raise ValueError(raw)
        return kind(raw)
    except ValueError:
        raise ConfigError(f"field {section}.{key} has invalid value {raw!r}") from None


def _float_tuple(section: str, key: str, raw: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in raw.split(",") if tok.strip())
    except ValueError:
        raise ConfigError(f"field {section}.{key} must be a comma-separated number list") from None


def read_sections(text: str) -> dict[str, dict[str, str]]:
    """Raw section -> {key: value} mapping, with schema validation."""
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    sections = {name: dict(cp.items(name)) for name in cp.sections()}
    for name, kv in sections.items():
        if name not in _SCHEMA:
            raise ConfigError(f"unknown section [{name}]")
        for key in kv:
            if key not in _SCHEMA[name]:
                raise ConfigError(f"unknown key {name}.{key}")
    return sections


def apply_override(sections: dict, assignment: str) -> None:
    """Apply one ``section.key=value`` override in place."""
    head, sep, value = assignment.partition("=")
    sec, dot, key = head.strip().partition(".")
    if not sep or not dot or not sec or not key:
        raise ConfigError(f"override {assignment!r} is not of the form section.key=value")
    if sec not in _SCHEMA or key not in _SCHEMA[sec]:
        raise ConfigError(f"unknown key {sec}.{key}")
    sections.setdefault(sec, {})[key] = value.strip()


def _build_potential(kv: dict[str, str]) -> PotentialSpec:
    if "kind" not in kv:
        raise ConfigError("missing required key potential.kind")
    kwargs = {"kind": kv["kind"]}
    for key in ("g", "r", "epsilon0", "x0", "hbar", "mass", "offset"):
        if key in kv:
            kwargs[key] = _typed("potential", key, kv[key], float)
    if "domain" in kv:
        kwargs["domain"] = kv["domain"]
    for key in ("x_table", "v_table"):
        if key in kv:
            kwargs[key] = _float_tuple("potential", key, kv[key])
    try:
        return PotentialSpec(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _build_grid(kv: dict[str, str]) -> tuple[schrodinger.GridConfig | None, float]:
    rel_tol = _typed("grid", "rel_tol", kv["rel_tol"], float) if "rel_tol" in kv \
        else schrodinger.DEFAULT_GRID_RTOL
    explicit = [k for k in ("x_min", "x_max", "points") if k in kv]
    if not explicit:
        return None, rel_tol
    for key in ("x_min", "x_max", "points"):
        if key not in kv:
            raise ConfigError(f"missing required key grid.{key}")
    try:
        grid = schrodinger.GridConfig(
            _typed("grid", "x_min", kv["x_min"], float),
            _typed("grid", "x_max", kv["x_max"], float),
            _typed("grid", "points", kv["points"], int),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return grid, rel_tol


def _build_model(kv: dict[str, str]) -> tuple[fock.PrimeOscillatorModel, int | None]:
    if "n_max" not in kv:
        raise ConfigError("missing required key model.n_max")
    epsilon0 = _typed("model", "epsilon0", kv.get("epsilon0", "1.0"), float)
    n_max = _typed("model", "n_max", kv["n_max"], int)
    try:
        model = fock.PrimeOscillatorModel(epsilon0, n_max)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    shift = _typed("model", "shift_integer", kv["shift_integer"], int) \
        if "shift_integer" in kv else None
    return model, shift


_PARAM_TYPES = {"count": int, "beta": float, "k": int, "window_lo": int, "window_hi": int,
                "tolerance": float, "form": str, "input": str, "input_a": str, "input_b": str}


def _build_params(kv: dict[str, str]) -> dict:
    params = {}
    for key, raw in kv.items():
        if key == "r_values":
            params[key] = _float_tuple("params", key, raw)
        else:
            params[key] = _typed("params", key, raw, _PARAM_TYPES[key])
    if "form" in params and params["form"] not in ("power", "logarithmic"):
        raise ConfigError("field params.form must be 'power' or 'logarithmic'")
    return params


def _check_required(config: ExperimentConfig) -> None:
    cmd = config.command
    need_potential = cmd in ("solve", "hagedorn", "law")
    if need_potential and config.potential is None:
        raise ConfigError(f"{cmd} requires a [potential] section")
    if cmd == "solve" and "count" not in config.params:
        raise ConfigError("missing required key params.count")
    if cmd == "fock" and config.model is None:
        raise ConfigError("fock requires a [model] section")
    if cmd in ("fit", "verify-shift"):
        if "input" not in config.params and config.potential is None:
            raise ConfigError(f"{cmd} requires params.input or a [potential] section")
        for key in ("window_lo", "window_hi"):
            if key not in config.params:
                raise ConfigError(f"missing required key params.{key}")
    if cmd == "pair":
        has_files = "input_a" in config.params and "input_b" in config.params
        has_model = config.model is not None and config.shift_integer is not None
        if not (has_files or has_model):
            raise ConfigError(
                "pair requires params.input_a and params.input_b, or a [model] "
                "section with shift_integer")


def parse_config(text: str) -> ExperimentConfig:
    """Validate an INI experiment description into an ExperimentConfig."""
    return config_from_sections(read_sections(text))


def config_from_sections(sections: dict[str, dict[str, str]]) -> ExperimentConfig:
    run = sections.get("run", {})
    if "command" not in run:
        raise ConfigError("missing required key run.command")
    command = run["command"]
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}; expected one of {COMMANDS}")
    fmt = run.get("format", "csv" if command in ("solve", "fock") else "report")
    if fmt not in FORMATS:
        raise ConfigError(f"field run.format must be one of {FORMATS}")

    config = ExperimentConfig(command=command, format=fmt, sections=sections)
    if "out" in run:
        config.out = Path(run["out"])
    if "potential" in sections:
        config.potential = _build_potential(sections["potential"])
    if "grid" in sections:
        config.grid, config.grid_rel_tol = _build_grid(sections["grid"])
    if "model" in sections:
        config.model, config.shift_integer = _build_model(sections["model"])
    if "params" in sections:
        config.params = _build_params(sections["params"])
    _check_required(config)
    return config


# ---------------------------------------------------------------------------
# output formatting
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    return str(value)


def _config_comment_lines(config: ExperimentConfig) -> list[str]:
    lines = ["logspec run"]
    for sec in sorted(config.sections):
        for key in sorted(config.sections[sec]):
            lines.append(f"{sec}.{key} = {config.sections[sec][key]}")
    return lines


def _record(fields: dict) -> str:
    return "".join(f"{k} = {_fmt(v)}\n" for k, v in fields.items())


def _report_text(config: ExperimentConfig, blocks: list[dict]) -> str:
    head = "".join(f"# {line}\n" for line in _config_comment_lines(config))
    return head + "\n".join(_record(b) for b in blocks)


class _Outputs:
    """Tracks written files so a failed run can remove its partial outputs."""

    def __init__(self):
        self.written: list[Path] = []

    def emit(self, path: Path | None, text: str) -> None:
        if path is None:
            print(text, end="")
        else:
            path.write_text(text)
            self.written.append(path)

    def cleanup(self) -> None:
        for path in self.written:
            try:
                path.unlink()
            except OSError:
                pass


# ---------------------------------------------------------------------------
# spectra helpers
# ---------------------------------------------------------------------------

def _solver_spectrum(config: ExperimentConfig, count: int) -> Spectrum:
    p = config.potential
    grid = config.grid or schrodinger.auto_grid(p, count, rel_tol=config.grid_rel_tol)
    return schrodinger.solve_spectrum(p, grid, count)


def _input_spectrum(config: ExperimentConfig, key: str, count_default: int) -> Spectrum:
    if key in config.params:
        return Spectrum.read_csv(config.params[key])
    count = config.params.get("count", count_default)
    return _solver_spectrum(config, count)


def _two_sector_csv(config: ExperimentConfig, sectors: tuple[Spectrum, Spectrum]) -> str:
    lines = [f"# {line}" for line in _config_comment_lines(config)]
    for idx, spec in enumerate(sectors):
        lines.append(f"# label sector {idx} = {spec.label}")
    lines.append("sector,n,E")
    for idx, spec in enumerate(sectors):
        for n, e in enumerate(spec.expanded(), start=1):
            lines.append(f"{idx},{n},{e:.12g}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_solve(config: ExperimentConfig, out: _Outputs) -> int:
    spec = _solver_spectrum(config, config.params["count"])
    header = tuple(_config_comment_lines(config)) + (f"label = {spec.label}",)
    out.emit(config.out, spec.to_csv(header))
    return 0


def _cmd_fock(config: ExperimentConfig, out: _Outputs) -> int:
    if config.shift_integer is not None:
        sectors = fock.combined_spectrum(
            fock.CombinedModel(config.model, config.shift_integer))
        out.emit(config.out, _two_sector_csv(config, sectors))
    else:
        spec = fock.enumerate_spectrum(config.model)
        header = tuple(_config_comment_lines(config)) + (f"label = {spec.label}",)
        out.emit(config.out, spec.to_csv(header))
    if "beta" in config.params:
        z = fock.fock_partition_function(config.model, config.params["beta"])
        print(_record({
            "partition_value": z.value,
            "convergent": z.convergent,
            "tail_bound": z.tail_bound if z.tail_bound is not None else "none",
            "beta": z.beta,
            "n_max": z.n_max,
        }), end="")
    return 0


def _cmd_hagedorn(config: ExperimentConfig, out: _Outputs) -> int:
    res = asymptotics.find_hagedorn(config.potential)
    block = {"command": "hagedorn", "potential": describe(config.potential),
             "beta_h": res.beta_h, "kind": res.kind}
    out.emit(config.out, _report_text(config, [block]))
    return 0


def _cmd_law(config: ExperimentConfig, out: _Outputs) -> int:
    law = asymptotics.asymptotic_law(config.potential)
    block = {"command": "law", "potential": describe(config.potential), "form": law.form}
    if law.form == asymptotics.POWER_FORM:
        block["hbar_m_exponent"] = law.hbar_m_exponent
        block["g_exponent"] = law.g_exponent
        block["n_exponent"] = law.n_exponent
    else:
        block["epsilon0"] = law.epsilon0
        block["offset"] = "fit separately"
    out.emit(config.out, _report_text(config, [block]))
    return 0


def _cmd_fit(config: ExperimentConfig, out: _Outputs) -> int:
    window = (config.params["window_lo"], config.params["window_hi"])
    form = config.params.get("form")
    if form is None:
        form = "logarithmic" if (config.potential is not None
                                 and config.potential.kind == LOGARITHMIC) else "power"
    spec = _input_spectrum(config, "input", count_default=window[1])
    fit = asymptotics.fit_exponent(spec, window, form=form)
    block = {"command": "fit", "label": spec.label, "form": fit.form,
             "window_lo": fit.window[0], "window_hi": fit.window[1]}
    if fit.form == asymptotics.POWER_FORM:
        block["exponent"] = fit.exponent
        block["prefactor"] = fit.prefactor
    else:
        block["epsilon0"] = fit.epsilon0
        block["offset"] = fit.offset
    block["residual_rms"] = fit.residual_rms
    out.emit(config.out, _report_text(config, [block]))
    return 0


def _cmd_pair(config: ExperimentConfig, out: _Outputs) -> int:
    if "input_a" in config.params:
        spec_a = Spectrum.read_csv(config.params["input_a"])
        spec_b = Spectrum.read_csv(config.params["input_b"])
    else:
        spec_a, spec_b = fock.combined_spectrum(
            fock.CombinedModel(config.model, config.shift_integer))
    tol = config.params.get("tolerance", psusy.EXACT_TOL)
    window = None
    if "window_lo" in config.params and "window_hi" in config.params:
        window = (config.params["window_lo"], config.params["window_hi"])
    report = psusy.detect_pairing(spec_a, spec_b, tol=tol, tail_window=window)
    res = report.residuals
    block = {
        "command": "pair",
        "label_a": spec_a.label,
        "label_b": spec_b.label,
        "k": report.k,
        "detected": report.detected,
        "matched_fraction": report.matched_fraction,
        "matches": len(report.matches),
        "residual_q50": float(np.median(res)) if res.size else 0.0,
        "residual_q90": float(np.quantile(res, 0.9)) if res.size else 0.0,
        "residual_max": float(res.max()) if res.size else 0.0,
        "asymptotic": report.asymptotic,
    }
    if window is not None:
        block["window_lo"], block["window_hi"] = window
    out.emit(config.out, _report_text(config, [block]))
    return 0 if report.detected else 1


def _cmd_verify_shift(config: ExperimentConfig, out: _Outputs) -> int:
    k = config.params.get("k", 2)
    window = (config.params["window_lo"], config.params["window_hi"])
    if config.potential is not None and config.potential.kind == LOGARITHMIC:
        epsilon0 = config.potential.epsilon0
    elif config.model is not None:
        epsilon0 = config.model.epsilon0
    else:
        epsilon0 = 1.0
    tol = config.params.get("tolerance", psusy.ASYMPTOTIC_TOL)
    spec = _input_spectrum(config, "input", count_default=k * window[1])
    report = psusy.verify_shift_identity(spec, epsilon0, k, window, rel_tol=tol)
    block = {
        "command": "verify-shift",
        "label": spec.label,
        "k": report.k,
        "shift": report.shift,
        "window_lo": report.window[0],
        "window_hi": report.window[1],
        "median_residual": report.median,
        "trend_decreasing": report.trend_decreasing,
        "tolerance": tol,
        "holds": report.holds,
    }
    out.emit(config.out, _report_text(config, [block]))
    return 0 if report.holds else 1


# ---------------------------------------------------------------------------
# reproduce: the bundled end-to-end checks
# ---------------------------------------------------------------------------

def _claim(name: str, expected, observed, tolerance, passed: bool, **extra) -> dict:
    block = {"claim": name, "expected": expected, "observed": observed,
             "tolerance": tolerance, "pass": passed}
    block.update(extra)
    return block


def _reproduce_blocks(config: ExperimentConfig) -> list[dict]:
    blocks = []

    # prime-oscillator bijection: exhaustive enumeration reproduces ln(n)
    model = config.model or fock.PrimeOscillatorModel(1.0, 10_000)
    spec = fock.enumerate_spectrum(model)
    n = np.arange(1, model.n_max + 1, dtype=float)
    ok_count = spec.n_levels == model.n_max
    max_deg = int(spec.degeneracies.max())
    dev = np.abs(spec.energies - model.epsilon0 * np.log(n[:spec.n_levels])) \
        / np.maximum(model.epsilon0 * np.log(n[:spec.n_levels]), 1.0)
    observed = float(dev.max())
    blocks.append(_claim("fock-bijection", 0.0, observed, 1e-12,
                         ok_count and max_deg == 1 and observed <= 1e-12,
                         levels=spec.n_levels, max_degeneracy=max_deg))

    # solver oracle: harmonic well on the full line
    osc = PotentialSpec(POWER_LAW, g=1.0, r=2.0, domain=FULL_LINE)
    s = schrodinger.solve_spectrum(osc, schrodinger.auto_grid(osc, 20, rel_tol=1e-4), 20)
    oracle = math.sqrt(2.0) * (np.arange(1, 21) - 0.5)
    obs = float(np.max(np.abs(s.expanded() - oracle) / oracle))
    blocks.append(_claim("oscillator-levels", 0.0, obs, 1e-3, obs <= 1e-3))

    # solver oracle: flat box (hard walls at 0 and pi)
    box = PotentialSpec(TABULATED, x_table=(0.0, math.pi), v_table=(0.0, 0.0))
    s = schrodinger.solve_spectrum(box, schrodinger.auto_grid(box, 10, rel_tol=1e-4), 10)
    oracle = np.arange(1, 11, dtype=float) ** 2 * math.pi ** 2 / (2.0 * math.pi ** 2)
    obs = float(np.max(np.abs(s.expanded() - oracle) / oracle))
    blocks.append(_claim("square-well-levels", 0.0, obs, 1e-3, obs <= 1e-3))

    # exponent chain: solve + fit vs the spacing law for each configured r
    r_values = config.params.get("r_values", (1.0, 2.0, 3.0, 6.0))
    for r in r_values:
        even = abs(r - round(r)) < 1e-12 and round(r) % 2 == 0
        p = PotentialSpec(POWER_LAW, g=1.0, r=float(r),
                          domain=FULL_LINE if even else "half_line")
        s = schrodinger.solve_spectrum(p, schrodinger.auto_grid(p, 200, rel_tol=3e-4), 200)
        fit = asymptotics.fit_exponent(s, (50, 200), form="power")
        want = asymptotics.scaling_exponent(float(r))
        rel = abs(fit.exponent - want) / want
        blocks.append(_claim(f"exponent-chain-r{r:g}", want, fit.exponent, 0.02,
                             rel <= 0.02, relative_deviation=rel))

    # logarithmic potential: shift identity and epsilon0 recovery
    logp = PotentialSpec(LOGARITHMIC, epsilon0=1.0, x0=1.0)
    s = schrodinger.solve_spectrum(logp, schrodinger.auto_grid(logp, 600, rel_tol=1e-3), 600)
    rep = psusy.verify_shift_identity(s, 1.0, 2, (100, 300))
    blocks.append(_claim("log-shift-median", 0.0, abs(rep.median), 0.05 * rep.shift,
                         rep.holds, shift=rep.shift, trend_decreasing=rep.trend_decreasing))
    fit = asymptotics.fit_exponent(s, (100, 600), form="logarithmic")
    dev = abs(fit.epsilon0 - 1.0)
    blocks.append(_claim("log-epsilon0-fit", 1.0, fit.epsilon0, 0.05, dev <= 0.05,
                         offset=fit.offset))
    return blocks


def _cmd_reproduce(config: ExperimentConfig, out: _Outputs) -> int:
    blocks = _reproduce_blocks(config)
    out.emit(config.out, _report_text(config, blocks))
    return 0 if all(b["pass"] for b in blocks) else 1


_DISPATCH = {
    "solve": _cmd_solve,
    "fock": _cmd_fock,
    "hagedorn": _cmd_hagedorn,
    "law": _cmd_law,
    "fit": _cmd_fit,
    "pair": _cmd_pair,
    "verify-shift": _cmd_verify_shift,
    "reproduce": _cmd_reproduce,
}


def run(config: ExperimentConfig) -> int:
    """Execute one experiment; returns the process exit status.

    Any failure removes partial outputs and prints a machine-readable
    error record to stderr.
    """
    out = _Outputs()
    try:
        return _DISPATCH[config.command](config, out)
    except Exception as exc:
        out.cleanup()
        sys.stderr.write(_record({"error": type(exc).__name__, "message": str(exc)}))
        return 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="logspec",
        description="spectra of prime-mode oscillators and 1D Schrodinger problems, "
                    "with asymptotic level-spacing checks")
    parser.add_argument("--config", required=True, help="INI experiment description")
    parser.add_argument("--out", help="output path (overrides run.out)")
    parser.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="SECTION.KEY=VALUE", help="override one config value")
    args = parser.parse_args(argv)
    try:
        sections = read_sections(Path(args.config).read_text())
        for assignment in args.overrides:
            apply_override(sections, assignment)
        config = config_from_sections(sections)
    except (ConfigError, OSError) as exc:
        sys.stderr.write(_record({"error": type(exc).__name__, "message": str(exc)}))
        return 1
    if args.out:
        config.out = Path(args.out)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
