"""
Command-line front end.

Usage::

    nearfield phase-shifts --potential hard-sphere:a=1 --k 1 --lmax 10
    nearfield amplitude    --potential well.pot --k 1 --r log:1:1e4:9 --theta 0:pi:7
    nearfield cross-section --potential square-well:a=1,V0=3 --k 1 --r 1:10:10
    nearfield field-map    --potential well.pot --k 1 --r 0.5:20:100 --theta 0:pi:90
    nearfield convergence  --potential hard-sphere:a=1 --k 1 --r log:1:1e4:41

Exit codes: 0 success, 2 input, 3 domain, 4 numerical, 5 capacity.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .errors import InputError, NearfieldError
from .observables import (
    angular_integral,
    diff_cross_section,
    fit_rate,
    optical_theorem_cross_section,
    total_cross_section,
    total_cross_section_asymptotic,
    total_cross_section_hankel,
)
from .radial import Potential, phase_shifts
from .report import ObservableReport
from .scattering import (
    FieldPoint,
    amplitude_far,
    amplitude_near,
    partial_amplitudes,
    total_field,
)

UNITS = "hbar^2/2m = 1 (V in units of k^2); lengths in the potential's unit, i.e. units of a for analytic potentials"


class Command(Enum):
    PHASE_SHIFTS = "phase-shifts"
    AMPLITUDE = "amplitude"
    CROSS_SECTION = "cross-section"
    FIELD_MAP = "field-map"
    CONVERGENCE = "convergence"


_NEEDS_R = {Command.AMPLITUDE, Command.CROSS_SECTION, Command.FIELD_MAP, Command.CONVERGENCE}
_DEFAULT_THETA = {
    Command.AMPLITUDE: "0:pi:7",
    Command.CROSS_SECTION: "0:pi:7",
    Command.FIELD_MAP: "0:pi:7",
    Command.CONVERGENCE: "pi/2",
}


@dataclass(frozen=True)
class RunConfig:
    command: Command
    potential_source: str
    k: float
    l_max: Optional[int] = None
    r_spec: Optional[str] = None
    theta_spec: Optional[str] = None
    radii: tuple = ()
    thetas: tuple = ()
    output_format: str = "csv"
    output_path: Optional[str] = None

    def echo(self) -> dict:
        return {
            "command": self.command.value,
            "potential": self.potential_source,
            "k": self.k,
            "lmax": self.l_max,
            "r": self.r_spec,
            "theta": self.theta_spec,
            "format": self.output_format,
        }


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------

_PI_RE = re.compile(r"^([+-]?(?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?)\*?pi(?:/([0-9.eE+-]+))?$")


def parse_number(text: str) -> float:
    """Float literal, optionally a multiple/fraction of ``pi`` (``pi/2``, ``2pi``, ``-pi``)."""
    t = text.strip().lower()
    m = _PI_RE.match(t)
    if m:
        mult = m.group(1)
        if mult in ("", "+"):
            factor = 1.0
        elif mult == "-":
            factor = -1.0
        else:
            factor = float(mult)
        value = factor * math.pi
        if m.group(2):
            value /= float(m.group(2))
        return value
    try:
        value = float(t)
    except ValueError:
        raise InputError(f"malformed number {text!r}") from None
    if not math.isfinite(value):
        raise InputError(f"non-finite number {text!r}")
    return value


def parse_range(text: str) -> tuple:
    """
    Grid syntax: ``start:stop:count`` (linear), ``log:start:stop:count``
    (geometric), a comma list, or a single number.

    >>> parse_range("0:1:3")
    (0.0, 0.5, 1.0)
    """
    t = text.strip()
    log = t.startswith("log:")
    body = t[4:] if log else t
    if ":" in body:
        parts = body.split(":")
        if len(parts) != 3:
            raise InputError(f"range {text!r} must be start:stop:count")
        start, stop = parse_number(parts[0]), parse_number(parts[1])
        try:
            count = int(parts[2])
        except ValueError:
            raise InputError(f"range count in {text!r} must be an integer") from None
        if count < 1:
            raise InputError(f"range count in {text!r} must be >= 1")
        if log:
            if start <= 0 or stop <= 0:
                raise InputError(f"log range {text!r} needs positive endpoints")
            vals = np.geomspace(start, stop, count)
        else:
            vals = np.linspace(start, stop, count)
        return tuple(float(v) for v in vals)
    if log:
        raise InputError(f"log range {text!r} must be log:start:stop:count")
    return tuple(parse_number(p) for p in body.split(","))


def _read_keyvalue(path: Path) -> tuple[dict, list]:
    """``key = value`` lines plus bare ``r, V`` rows; ``#`` starts a comment."""
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {str(path)!r}: {exc.strerror}") from None
    keys: dict[str, str] = {}
    rows: list = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.rstrip(":").lower() == "rows":
            continue
        if "=" in line:
            key, value = line.split("=", 1)
            keys[key.strip()] = value.strip()
            continue
        parts = [p for p in re.split(r"[,\s]+", line) if p]
        if len(parts) != 2:
            raise InputError(f"{path}:{lineno}: expected 'key = value' or 'r, V', got {raw!r}")
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise InputError(f"{path}:{lineno}: malformed row {raw!r}") from None
    return keys, rows


def _num(fields: dict, key: str, where: str, required: bool = True):
    if key not in fields:
        if required:
            raise InputError(f"{where}: missing required field {key!r}")
        return None
    return parse_number(str(fields[key]))


def _potential_from_fields(kind: str, fields: dict, rows: list, where: str) -> Potential:
    kind = kind.strip().lower()
    if kind == "zero":
        sr = _num(fields, "support_radius", where, required=False)
        return Potential.zero(sr if sr is not None else 1.0)
    if kind == "hard-sphere":
        return Potential.hard_sphere(_num(fields, "a", where))
    if kind == "square-well":
        return Potential.square_well(_num(fields, "a", where), _num(fields, "V0", where))
    if kind in ("table", "tabulated"):
        if not rows:
            raise InputError(f"{where}: table potential has no 'r, V' rows")
        r, v = zip(*rows)
        return Potential.tabulated(r, v, _num(fields, "support_radius", where, required=False))
    raise InputError(f"{where}: unknown potential kind {kind!r}")


def load_potential(source: str) -> Potential:
    """Inline spec (``hard-sphere:a=1``, ``square-well:a=1,V0=3``, ``zero``) or a potential file."""
    path = Path(source)
    if path.is_file():
        fields, rows = _read_keyvalue(path)
        if "kind" not in fields:
            raise InputError(f"{source}: missing required field 'kind'")
        return _potential_from_fields(fields["kind"], fields, rows, source)
    kind, _, rest = source.partition(":")
    fields = {}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        if "=" not in item:
            raise InputError(f"potential spec {source!r}: expected key=value, got {item!r}")
        key, value = item.split("=", 1)
        fields[key.strip()] = value.strip()
    if kind.strip().lower() in ("table", "tabulated"):
        raise InputError(f"table potentials must come from a file, got {source!r}")
    if kind.strip().lower() not in ("zero", "hard-sphere", "square-well"):
        raise InputError(f"potential {source!r} is neither a file nor a known inline spec")
    return _potential_from_fields(kind, fields, [], f"potential spec {source!r}")


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nearfield", description="Finite-distance partial-wave scattering observables.")
    p.add_argument("--version", action="version", version=f"nearfield {__version__}")
    p.add_argument("command", choices=[c.value for c in Command])
    p.add_argument("--potential")
    p.add_argument("--k")
    p.add_argument("--lmax")
    p.add_argument("--r")
    p.add_argument("--theta")
    p.add_argument("--format")
    p.add_argument("--out")
    p.add_argument("--config")
    return p


_CONFIG_KEYS = {"command", "potential", "k", "lmax", "r", "theta", "format", "out"}


def parse_config(argv: Sequence[str], config_file: Optional[str] = None) -> RunConfig:
    """
    Validate command-line flags (plus an optional ``key = value`` config file).

    Flags override file values.  Every violated constraint is collected
    into a single :class:`InputError`.
    """
    argv = list(argv)
    parser = _build_parser()
    ns, unknown = parser.parse_known_args(argv)
    problems: list[str] = [f"unknown argument {tok!r}" for tok in unknown]

    values: dict[str, Optional[str]] = {}
    cfg = config_file or ns.config
    if cfg:
        fields, rows = _read_keyvalue(Path(cfg))
        if rows:
            problems.append(f"config file {cfg!r} contains bare data rows")
        for key, value in fields.items():
            if key not in _CONFIG_KEYS:
                problems.append(f"unknown config key {key!r} in {cfg!r}")
            else:
                values[key] = value
    for key in ("potential", "k", "lmax", "r", "theta", "format", "out"):
        v = getattr(ns, key)
        if v is not None:
            values[key] = v

    command = Command(ns.command)
    if "command" in values and values["command"] != command.value:
        problems.append(f"config file command {values['command']!r} conflicts with {command.value!r}")

    potential = values.get("potential")
    if not potential:
        problems.append("missing required --potential")

    k = None
    if values.get("k") is None:
        problems.append("missing required --k")
    else:
        try:
            k = parse_number(values["k"])
            if k <= 0:
                problems.append(f"k must be positive, got {values['k']!r}")
        except InputError as exc:
            problems.append(f"--k: {exc}")

    l_max = None
    if values.get("lmax") is not None:
        try:
            l_max = int(values["lmax"])
            if l_max < 0:
                problems.append(f"lmax must be >= 0, got {values['lmax']!r}")
        except ValueError:
            problems.append(f"--lmax: malformed integer {values['lmax']!r}")

    radii: tuple = ()
    r_spec = values.get("r")
    if command in _NEEDS_R:
        if r_spec is None:
            problems.append(f"{command.value} needs --r")
        else:
            try:
                radii = parse_range(r_spec)
                if any(r <= 0 for r in radii):
                    problems.append(f"--r values must be positive, got {r_spec!r}")
            except InputError as exc:
                problems.append(f"--r: {exc}")
        if command is Command.CONVERGENCE and radii:
            if len(radii) < 3:
                problems.append("convergence needs at least 3 radii")
            elif any(b <= a for a, b in zip(radii, radii[1:])):
                problems.append("convergence radii must be strictly increasing")

    thetas: tuple = ()
    theta_spec = values.get("theta")
    if command in _DEFAULT_THETA:
        theta_spec = theta_spec or _DEFAULT_THETA[command]
        try:
            thetas = parse_range(theta_spec)
            if any(not (0.0 <= t <= math.pi + 1e-12) for t in thetas):
                problems.append(f"--theta values must lie in [0, pi], got {theta_spec!r}")
            thetas = tuple(min(t, math.pi) for t in thetas)
        except InputError as exc:
            problems.append(f"--theta: {exc}")

    fmt = (values.get("format") or "csv").lower()
    if fmt not in ("csv", "json"):
        problems.append(f"--format must be csv or json, got {values.get('format')!r}")

    if problems:
        raise InputError("; ".join(problems))
    return RunConfig(
        command=command,
        potential_source=potential,
        k=k,
        l_max=l_max,
        r_spec=r_spec,
        theta_spec=theta_spec,
        radii=radii,
        thetas=thetas,
        output_format=fmt,
        output_path=values.get("out"),
    )


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------


def run(config: RunConfig) -> ObservableReport:
    potential = load_potential(config.potential_source)
    ps = phase_shifts(potential, config.k, config.l_max)
    amps = partial_amplitudes(ps)
    report = ObservableReport(
        meta={
            "program": "nearfield",
            "version": __version__,
            "units": UNITS,
            "config": config.echo(),
            "potential": potential.describe(),
        }
    )
    d = report.diagnostics
    d["l_max"] = ps.l_max
    d["truncation_estimate"] = ps.truncation_estimate
    d["sigma_asymptotic"] = total_cross_section_asymptotic(ps)
    cmd = config.command

    if cmd is Command.PHASE_SHIFTS:
        t = report.table("phase_shifts", ["l", "delta", "re_S", "im_S", "re_c", "im_c"])
        for l, (delta, c) in enumerate(zip(ps.deltas, amps.coefficients)):
            t.add(l, delta, math.cos(2 * delta), math.sin(2 * delta), c.real, c.imag)
        d["sigma_optical_theorem"] = optical_theorem_cross_section(ps)

    elif cmd is Command.AMPLITUDE:
        t = report.table("partial_amplitudes", ["l", "re_c", "im_c"])
        for l, c in enumerate(amps.coefficients):
            t.add(l, c.real, c.imag)
        t = report.table(
            "amplitudes", ["r", "theta", "re_f_far", "im_f_far", "re_f_near", "im_f_near", "abs_near_minus_far"]
        )
        far = {th: amplitude_far(amps, th) for th in config.thetas}
        for r in config.radii:
            for th in config.thetas:
                fn = amplitude_near(amps, r, th)
                t.add(r, th, far[th].real, far[th].imag, fn.real, fn.imag, abs(fn - far[th]))

    elif cmd is Command.CROSS_SECTION:
        t = report.table("differential", ["r", "theta", "dsigma_domega", "dsigma_domega_far"])
        far = {th: abs(amplitude_far(amps, th)) ** 2 for th in config.thetas}
        for r in config.radii:
            for th in config.thetas:
                t.add(r, th, diff_cross_section(amps, r, th).dsigma_domega, far[th])
        t = report.table("total", ["r", "sigma_r", "sigma_r_hankel", "sigma_quadrature"])
        for r in config.radii:
            t.add(
                r,
                total_cross_section(ps, r).sigma_total,
                total_cross_section_hankel(ps, r),
                angular_integral(ps, r).quadrature,
            )
        d["sigma_optical_theorem"] = optical_theorem_cross_section(ps)

    elif cmd is Command.FIELD_MAP:
        t = report.table(
            "field",
            ["r", "theta", "re_psi_in", "im_psi_in", "re_psi_sc", "im_psi_sc", "re_psi", "im_psi", "dsigma_domega"],
        )
        worst = 0.0
        for r in config.radii:
            for th in config.thetas:
                w = total_field(ps, FieldPoint(r, th))
                worst = max(worst, w.discrepancy)
                sc = w.psi_sc
                t.add(
                    r, th, w.psi_in.real, w.psi_in.imag, sc.real, sc.imag,
                    w.psi_total.real, w.psi_total.imag, r * r * (sc.real**2 + sc.imag**2),
                )
        d["max_route_discrepancy"] = worst

    elif cmd is Command.CONVERGENCE:
        theta = config.thetas[0]
        radii = np.asarray(config.radii)
        sigma_inf = d["sigma_asymptotic"]
        f_far = amplitude_far(amps, theta)
        t = report.table("convergence", ["r", "sigma_r", "sigma_residual", "abs_f_near", "near_residual"])
        sig_res, near_res = [], []
        for r in radii:
            s = total_cross_section(ps, r).sigma_total
            fn = amplitude_near(amps, r, theta)
            sig_res.append(abs(s - sigma_inf))
            near_res.append(abs(fn - f_far))
            t.add(r, s, sig_res[-1], abs(fn), near_res[-1])
        d["theta"] = theta
        d["abs_f_far"] = abs(f_far)
        d["fitted_rate_total"] = fit_rate(radii, sig_res)
        d["fitted_rate_near"] = fit_rate(radii, near_res)

    report.check_finite()
    return report


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        config = parse_config(argv)
        report = run(config)
        text = report.render(config.output_format)
        if config.output_path:
            try:
                Path(config.output_path).write_text(text)
            except OSError as exc:
                raise InputError(f"cannot write {config.output_path!r}: {exc.strerror}") from None
        else:
            sys.stdout.write(text)
    except NearfieldError as exc:
        print(f"nearfield: error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
