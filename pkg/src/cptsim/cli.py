"""
Command-line front end.

Configuration comes from an optional flat ``key = value`` file (``#`` starts
a comment) merged with ``--key value`` overrides; dashes and underscores in
keys are interchangeable and case is ignored. Exit codes: 0 success,
2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Callable

from .coupling import stationary_dark_states
from .dynamics import RateSet
from .errors import InvalidArgumentError, NumericalError, SingularityError
from .field import SCHEMES
from .spectroscopy import (
    DEFAULT_RABI,
    DEFAULT_RABI_SWEEP,
    ScanConfig,
    bfield_csv,
    bfield_family,
    compare_schemes,
    comparison_csv,
    format_float,
    lineshape_csv,
    scan,
)
from .structure import ATOMS, build_level_set

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3

class ConfigError(Exception):
    pass


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.replace(";", ",").split(",") if v.strip()]


def _words(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


@dataclass(frozen=True)
class Key:
    parse: Callable
    help: str


KEYS: dict[str, Key] = {
    "atom": Key(str, f"atom preset: {', '.join(sorted(ATOMS))}"),
    "excited_F": Key(float, "excited hyperfine level F_e"),
    "scheme": Key(str, f"polarization scheme: {', '.join(SCHEMES)}"),
    "pol1_angle": Key(float, "component 1 (upper ground level) ellipse axis angle, rad; with the other pol keys replaces scheme"),
    "pol1_ellipticity": Key(float, "component 1 ellipticity angle, rad (+pi/4 = sigma+)"),
    "pol2_angle": Key(float, "component 2 (lower ground level) ellipse axis angle, rad"),
    "pol2_ellipticity": Key(float, "component 2 ellipticity angle, rad"),
    "rabi": Key(float, "Rabi scale of both components, rad/s"),
    "rabi1": Key(float, "Rabi scale of component 1, rad/s"),
    "rabi2": Key(float, "Rabi scale of component 2, rad/s"),
    "detuning1": Key(float, "optical detuning of component 1, Hz"),
    "detuning2": Key(float, "optical detuning of component 2, Hz"),
    "B": Key(float, "longitudinal magnetic field, G"),
    "delta_start": Key(float, "first two-photon detuning, Hz"),
    "delta_stop": Key(float, "last two-photon detuning, Hz"),
    "delta_step": Key(float, "two-photon detuning step, Hz"),
    "doppler": Key(_bool, "Doppler averaging on/off"),
    "doppler_fwhm": Key(float, "Doppler FWHM, Hz (default: atom preset)"),
    "doppler_points": Key(int, "Gauss-Hermite nodes"),
    "gamma_natural": Key(float, "natural decay rate, rad/s (default: atom preset)"),
    "optical_dephasing": Key(float, "optical dephasing rate, rad/s"),
    "ground_relaxation": Key(float, "ground relaxation rate, rad/s"),
    "excited_quench": Key(float, "extra excited-state quench rate, rad/s"),
    "gJ_ground": Key(float, "override ground g_J"),
    "gJ_excited": Key(float, "override excited g_J"),
    "nuclear_gI": Key(float, "override nuclear g_I"),
    "hfs_ground": Key(float, "override ground hyperfine splitting, Hz"),
    "hfs_excited": Key(float, "override excited hyperfine splitting, Hz"),
    "B_values": Key(_floats, "bscan: comma-separated fields, G"),
    "schemes": Key(_words, "compare: comma-separated scheme/F_e entries"),
    "rabi_values": Key(_floats, "compare: comma-separated Rabi scales, rad/s"),
    "pair": Key(str, "darkstates: 'mirror' (default, the (-m,+m) pairs), 'auto' (every Lambda pair) or 'm_lower,m_upper'"),
    "workers": Key(int, "threads used for scan points"),
}

_CANONICAL = {k.lower(): k for k in KEYS}
_ATOM_KEYS = ("gJ_ground", "gJ_excited", "nuclear_gI", "hfs_ground", "hfs_excited")

DEFAULT_COMPARE_SCHEMES = "lin_par_lin/1,sigma_sigma/2,lin_par_lin/2"


def canonical_key(raw: str) -> str:
    k = raw.strip().lstrip("-").replace("-", "_").lower()
    if k not in _CANONICAL:
        raise ConfigError(f"unknown configuration key: {raw.strip()!r}")
    return _CANONICAL[k]


def read_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{n}: expected 'key = value'")
        k, v = line.split("=", 1)
        out[canonical_key(k)] = v.strip()
    return out


def parse_values(raw: dict[str, str]) -> dict:
    vals = {}
    for k, v in raw.items():
        try:
            vals[k] = KEYS[k].parse(v)
        except ValueError as exc:
            raise ConfigError(f"bad value for {k}: {v!r} ({exc})") from None
    return vals


def build_scan_config(vals: dict, need_range: bool) -> ScanConfig:
    if need_range:
        missing = [k for k in ("delta_start", "delta_stop") if k not in vals]
        if missing:
            raise ConfigError(f"two-photon detuning range not given: missing {', '.join(missing)}")
    kw = {}
    for k in ("atom", "scheme", "B", "delta_start", "delta_stop", "delta_step",
              "doppler", "doppler_fwhm", "doppler_points", "detuning1", "detuning2"):
        if k in vals:
            kw[k] = vals[k]
    if "excited_F" in vals:
        kw["excited_F"] = vals["excited_F"]
    rabi = vals.get("rabi", DEFAULT_RABI)
    kw["rabi1"] = vals.get("rabi1", rabi)
    kw["rabi2"] = vals.get("rabi2", rabi)
    pol = [k for k in ("pol1_angle", "pol1_ellipticity", "pol2_angle", "pol2_ellipticity") if k in vals]
    if pol:
        kw["polarizations"] = (
            (vals.get("pol1_angle", 0.0), vals.get("pol1_ellipticity", 0.0)),
            (vals.get("pol2_angle", 0.0), vals.get("pol2_ellipticity", 0.0)),
        )
    kw["atom_overrides"] = {k: vals[k] for k in _ATOM_KEYS if k in vals}
    cfg = ScanConfig(**kw)
    atom = cfg.atom_spec()
    rate_kw = {}
    for key, field in (("gamma_natural", "gamma_natural"), ("optical_dephasing", "optical_dephasing"),
                       ("ground_relaxation", "ground_relaxation"), ("excited_quench", "extra_excited_quench")):
        if key in vals:
            rate_kw[field] = vals[key]
    return cfg.replace(rates=RateSet.for_atom(atom, **rate_kw))


def config_echo(vals: dict) -> str:
    return "\n".join(f"{k} = {vals[k]}" for k in sorted(vals))


def _levels(vals, args):
    cfg = build_scan_config(vals, need_range=False)
    levels = build_level_set(cfg.atom_spec(), cfg.excited_F, cfg.B)
    lines = ["manifold,F,m,energy_hz"]
    for lev in levels.levels:
        lines.append(f"{lev.manifold},{lev.F},{lev.m},{format_float(lev.energy)}")
    return "\n".join(lines) + "\n"


def _darkstates(vals, args):
    cfg = build_scan_config(vals, need_range=False)
    levels = build_level_set(cfg.atom_spec(), cfg.excited_F, cfg.B)
    pair = vals.get("pair", "mirror").strip()
    if pair not in ("mirror", "auto"):
        try:
            pair = tuple(float(v) for v in pair.split(","))
        except ValueError:
            raise ConfigError(f"bad value for pair: {pair!r}") from None
        if len(pair) != 2:
            raise ConfigError("pair needs two projections m_lower,m_upper")
    return stationary_dark_states(levels, cfg.build_field(), pair=pair).to_text()


def _scan(vals, args):
    cfg = build_scan_config(vals, need_range=True)
    return lineshape_csv(scan(cfg, workers=vals.get("workers")), config_echo(vals) if args.echo_config else None)


def _bscan(vals, args):
    cfg = build_scan_config(vals, need_range=False)
    if "B_values" not in vals:
        raise ConfigError("bscan needs B_values")
    fam = bfield_family(cfg, vals["B_values"], workers=vals.get("workers"))
    return bfield_csv(fam, config_echo(vals) if args.echo_config else None)


def _compare(vals, args):
    cfg = build_scan_config(vals, need_range=False)
    schemes = vals.get("schemes", _words(DEFAULT_COMPARE_SCHEMES))
    rabis = vals.get("rabi_values", DEFAULT_RABI_SWEEP)
    rows = compare_schemes(cfg, schemes, rabis, workers=vals.get("workers"))
    return comparison_csv(rows, config_echo(vals) if args.echo_config else None)


COMMANDS = {
    "levels": (_levels, "list ground and excited sublevels with energies (Hz)"),
    "darkstates": (_darkstates, "stationary dark states and trap states of a scheme"),
    "scan": (_scan, "absorption versus two-photon detuning (needs delta_start, delta_stop)"),
    "bscan": (_bscan, "scans at several magnetic fields (needs B_values)"),
    "compare": (_compare, "resonance metrics for several schemes over a Rabi sweep"),
}


def _key_help() -> str:
    width = max(len(k) for k in KEYS)
    return "configuration keys (file or --key value):\n" + "\n".join(
        f"  {k.ljust(width)}  {v.help}" for k, v in KEYS.items()
    )


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cptsim",
        description="Coherent-population-trapping resonances of alkali D1 lines.",
        epilog=_key_help(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("command", choices=sorted(COMMANDS), help="; ".join(f"{k}: {v[1]}" for k, v in COMMANDS.items()))
    p.add_argument("--config", help="flat key = value configuration file")
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--echo-config", action="store_true", help="prefix CSV output with the configuration as # comments")
    return p


def _split_overrides(rest: list[str]) -> dict[str, str]:
    out = {}
    i = 0
    while i < len(rest):
        tok = rest[i]
        if not tok.startswith("--"):
            raise ConfigError(f"unexpected argument {tok!r}")
        if "=" in tok:
            k, v = tok[2:].split("=", 1)
            i += 1
        else:
            if i + 1 >= len(rest):
                raise ConfigError(f"missing value for {tok}")
            k, v = tok[2:], rest[i + 1]
            i += 2
        out[canonical_key(k)] = v
    return out


def run_cli(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = make_parser()
    try:
        args, rest = parser.parse_known_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        raw = {}
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                raw.update(read_config_text(fh.read(), args.config))
        raw.update(_split_overrides(rest))
        vals = parse_values(raw)
        text = COMMANDS[args.command][0](vals, args)
    except (ConfigError, InvalidArgumentError, OSError) as exc:
        print(f"cptsim: configuration error: {exc}", file=stderr)
        return EXIT_CONFIG
    except (NumericalError, SingularityError) as exc:
        print(f"cptsim: numerical failure: {exc}", file=stderr)
        return EXIT_NUMERICAL
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
