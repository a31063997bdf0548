"""Command-line interface: xps, xepecs, rho and entropy runs with CSV/JSON/SVG output.

Configuration is resolved in three layers: built-in defaults, an optional
flat JSON config file (--config or the XEPECS_CONFIG environment variable),
then command-line flags. Identical inputs produce byte-identical CSV/JSON.

Exit codes: 0 ok, 2 configuration error, 3 computation domain error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .amplitudes import CHANNELS, channel_label, xepecs_amplitudes
from .entanglement import (
    DomainError,
    entangled_state,
    entropy_sweep,
    full_density_matrix,
)
from .fockspace import Spin
from .model import ModelParams
from .polarization import EmissionGeometry
from .spectra import (
    auto_epsilon,
    broaden,
    default_xps_grid,
    xepecs_spectrum,
    xps_lines,
)

COMMANDS = ("xps", "xepecs", "rho", "entropy")

_PARAM_KEYS = ("G", "zeta", "eps_s", "eps_p", "Omega", "Gamma_1s", "gamma")
_ANGLE_KEYS = ("theta_deg", "phi_deg", "beta1_deg", "beta2_deg")
_CONFIG_KEYS = _PARAM_KEYS + _ANGLE_KEYS + ("epsilon",)

_FORMATS = {"xps": ("csv", "json", "svg"),
            "xepecs": ("csv", "json", "svg"),
            "entropy": ("csv", "json", "svg"),
            "rho": ("json", "csv")}


class ConfigError(Exception):
    """Invalid configuration; the message names the offending field."""


@dataclass
class RunConfig:
    params: ModelParams
    thetas_deg: list[float]      # one entry except for entropy sweeps
    phi_deg: float
    beta1_deg: float
    beta2_deg: float
    epsilon: float | str         # eV or "auto"
    out: Path | None
    format: str

    def geometry(self, theta_deg: float | None = None) -> EmissionGeometry:
        theta = self.thetas_deg[0] if theta_deg is None else theta_deg
        try:
            return EmissionGeometry.from_degrees(theta, self.phi_deg,
                                                 self.beta1_deg, self.beta2_deg)
        except ValueError as exc:
            raise ConfigError(f"theta/beta1/beta2: {exc}") from exc

    def resolve_epsilon(self) -> float:
        if self.epsilon == "auto":
            return auto_epsilon(self.params)
        return float(self.epsilon)


def _parse_theta(text: str) -> list[float]:
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError("theta: expected DEG or START:END:STEP")
        try:
            start, end, step = (float(p) for p in parts)
        except ValueError as exc:
            raise ConfigError(f"theta: {exc}") from exc
        if step <= 0 or end < start:
            raise ConfigError("theta: need END >= START and STEP > 0")
        count = int(np.floor((end - start) / step + 1e-9)) + 1
        values = [start + k * step for k in range(count)]
    else:
        try:
            values = [float(text)]
        except ValueError as exc:
            raise ConfigError(f"theta: {exc}") from exc
    for v in values:
        if not 0.0 <= v <= 180.0:
            raise ConfigError(f"theta: {v} outside [0, 180] degrees")
    return values


def _load_config_file(path: str | None) -> dict:
    if path is None:
        path = os.environ.get("XEPECS_CONFIG") or None
    if path is None:
        return {}
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config: top level must be a JSON object")
    for key, value in data.items():
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{key}: unknown configuration key")
        if key == "epsilon" and value == "auto":
            continue
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError(f"{key}: expected a number")
    return data


def build_config(args: argparse.Namespace) -> RunConfig:
    file_cfg = _load_config_file(args.config)

    params_kwargs = {k: float(file_cfg[k]) for k in _PARAM_KEYS if k in file_cfg}
    try:
        params = ModelParams(**params_kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    theta_text = args.theta if args.theta is not None else (
        str(file_cfg.get("theta_deg")) if "theta_deg" in file_cfg
        else ("0:180:1" if args.command == "entropy" else "90")
    )
    thetas = _parse_theta(theta_text)
    if args.command != "entropy" and len(thetas) != 1:
        raise ConfigError("theta: a single angle is required for this command")

    def angle(flag_value, key, default):
        if flag_value is not None:
            return float(flag_value)
        return float(file_cfg.get(key, default))

    phi = angle(args.phi, "phi_deg", 0.0)
    beta1 = angle(args.beta1, "beta1_deg", 90.0)
    beta2 = angle(args.beta2, "beta2_deg", 180.0)

    epsilon: float | str
    eps_arg = args.epsilon if args.epsilon is not None else file_cfg.get("epsilon", "auto")
    if eps_arg == "auto":
        epsilon = "auto"
    else:
        try:
            epsilon = float(eps_arg)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"epsilon: expected a number or 'auto', got {eps_arg!r}") from exc

    fmt = args.format if args.format is not None else ("json" if args.command == "rho" else "csv")
    if fmt not in _FORMATS[args.command]:
        allowed = "|".join(_FORMATS[args.command])
        raise ConfigError(f"format: {fmt!r} not supported for {args.command} (use {allowed})")

    out = Path(args.out) if args.out is not None else None
    cfg = RunConfig(params, thetas, phi, beta1, beta2, epsilon, out, fmt)
    cfg.geometry(thetas[0])  # validate angles early
    return cfg


# ---------------------------------------------------------------------------
# deterministic formatting
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _round12(x: float) -> float:
    return float(_fmt(float(x)))


def _write_text(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _csv(header: list[str], columns: list[np.ndarray | list]) -> str:
    lines = [",".join(header)]
    for i in range(len(columns[0])):
        lines.append(",".join(_fmt(float(col[i])) for col in columns))
    return "\n".join(lines) + "\n"


def _json_dump(obj) -> str:
    def clean(node):
        if isinstance(node, float):
            return _round12(node)
        if isinstance(node, dict):
            return {k: clean(v) for k, v in node.items()}
        if isinstance(node, (list, tuple)):
            return [clean(v) for v in node]
        return node

    return json.dumps(clean(obj), indent=2) + "\n"


_SVG_COLORS = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728")


def _render_svg(title: str, xlabel: str, ylabel: str,
                series: list[tuple[str, np.ndarray, np.ndarray]]) -> str:
    width, height = 800.0, 500.0
    ml, mr, mt, mb = 70.0, 20.0, 40.0, 50.0
    x_min = min(float(np.min(xs)) for _, xs, _ in series)
    x_max = max(float(np.max(xs)) for _, xs, _ in series)
    y_min = min(0.0, min(float(np.min(ys)) for _, _, ys in series))
    y_max = max(float(np.max(ys)) for _, _, ys in series)
    if y_max == y_min:
        y_max = y_min + 1.0
    if x_max == x_min:
        x_max = x_min + 1.0

    def sx(x):
        return ml + (x - x_min) / (x_max - x_min) * (width - ml - mr)

    def sy(y):
        return height - mb - (y - y_min) / (y_max - y_min) * (height - mt - mb)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:g}" height="{height:g}" '
        f'viewBox="0 0 {width:g} {height:g}">',
        f'<rect width="{width:g}" height="{height:g}" fill="white"/>',
        f'<text x="{width / 2:g}" y="24" text-anchor="middle" font-size="16">{title}</text>',
        f'<line x1="{ml:g}" y1="{height - mb:g}" x2="{width - mr:g}" y2="{height - mb:g}" '
        'stroke="black"/>',
        f'<line x1="{ml:g}" y1="{mt:g}" x2="{ml:g}" y2="{height - mb:g}" stroke="black"/>',
        f'<text x="{width / 2:g}" y="{height - 12:g}" text-anchor="middle" font-size="13">'
        f'{xlabel}</text>',
        f'<text x="18" y="{height / 2:g}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 18 {height / 2:g})">{ylabel}</text>',
        f'<text x="{ml:g}" y="{height - mb + 16:g}" text-anchor="middle" font-size="11">'
        f'{_fmt(x_min)}</text>',
        f'<text x="{width - mr:g}" y="{height - mb + 16:g}" text-anchor="middle" '
        f'font-size="11">{_fmt(x_max)}</text>',
        f'<text x="{ml - 6:g}" y="{sy(y_min):g}" text-anchor="end" font-size="11">'
        f'{_fmt(y_min)}</text>',
        f'<text x="{ml - 6:g}" y="{sy(y_max) + 4:g}" text-anchor="end" font-size="11">'
        f'{_fmt(y_max)}</text>',
    ]
    for k, (name, xs, ys) in enumerate(series):
        color = _SVG_COLORS[k % len(_SVG_COLORS)]
        points = " ".join(f"{sx(float(x)):.6g},{sy(float(y)):.6g}" for x, y in zip(xs, ys))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                     f'points="{points}"/>')
        parts.append(f'<text x="{width - mr - 8:g}" y="{mt + 16 + 16 * k:g}" '
                     f'text-anchor="end" font-size="12" fill="{color}">{name}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# command implementations
# ---------------------------------------------------------------------------

def _run_xps(config: RunConfig, spin: Spin, out: Path) -> None:
    lines = xps_lines(config.params, spin)
    grid = default_xps_grid()
    series = broaden(lines, config.params.Gamma_1s, grid)
    col = f"intensity_{spin.value}"
    if config.format == "csv":
        _write_text(out, _csv(["kinetic_energy_eV", col], [grid, series.intensity]))
    elif config.format == "json":
        payload = {
            "kinetic_energy_eV": [float(x) for x in grid],
            col: [float(y) for y in series.intensity],
            "lines": [
                {"kinetic_energy_eV": l.position, "weight": l.weight, "j": str(l.j)}
                for l in lines.lines
            ],
        }
        _write_text(out, _json_dump(payload))
    else:
        _write_text(out, _render_svg(f"1s photoemission ({spin.value}-spin)",
                                     "kinetic energy (eV)", "intensity (1/eV)",
                                     [(col, grid, series.intensity)]))


def _run_xepecs(config: RunConfig, out: Path) -> None:
    epsilon = config.resolve_epsilon()
    geom = config.geometry()
    columns = []
    grid = None
    for channel in CHANNELS:
        series = xepecs_spectrum(config.params, geom, epsilon, channel, grid)
        grid = series.grid
        columns.append((f"I_{channel_label(channel)}", series.intensity))
    if config.format == "csv":
        _write_text(out, _csv(["emission_energy_eV"] + [n for n, _ in columns],
                              [grid] + [c for _, c in columns]))
    elif config.format == "json":
        payload = {"emission_energy_eV": [float(x) for x in grid],
                   "epsilon_eV": float(epsilon)}
        payload.update({n: [float(y) for y in c] for n, c in columns})
        _write_text(out, _json_dump(payload))
    else:
        _write_text(out, _render_svg("coincidence emission spectra",
                                     "emission energy (eV)", "intensity (1/eV)",
                                     [(n, grid, c) for n, c in columns]))


def _run_rho(config: RunConfig, out: Path) -> None:
    epsilon = config.resolve_epsilon()
    amps = xepecs_amplitudes(config.params, config.geometry(), epsilon)
    rho = full_density_matrix(entangled_state(amps))
    if config.format == "json":
        payload = {
            "basis": list(rho.basis),
            "theta_deg": config.thetas_deg[0],
            "phi_deg": config.phi_deg,
            "epsilon_eV": float(epsilon),
            "matrix": [
                [{"re": float(z.real), "im": float(z.imag)} for z in row]
                for row in rho.matrix
            ],
        }
        _write_text(out, _json_dump(payload))
    else:
        lines = ["row,col,re,im"]
        for i in range(4):
            for j in range(4):
                z = rho.matrix[i, j]
                lines.append(f"{i},{j},{_fmt(z.real)},{_fmt(z.imag)}")
        _write_text(out, "\n".join(lines) + "\n")


def _run_entropy(config: RunConfig, out: Path) -> None:
    epsilon = config.resolve_epsilon()
    template = config.geometry(90.0)
    curve = entropy_sweep(config.params, template, config.thetas_deg, epsilon)
    thetas = np.array(curve.thetas)
    entropy = np.array(curve.entropy)
    if config.format == "csv":
        _write_text(out, _csv(["theta_deg", "entropy_bits"], [thetas, entropy]))
    elif config.format == "json":
        _write_text(out, _json_dump({"theta_deg": [float(t) for t in thetas],
                                     "entropy_bits": [float(s) for s in entropy]}))
    else:
        _write_text(out, _render_svg("entanglement entropy vs emission angle",
                                     "theta (deg)", "entropy (bits)",
                                     [("entropy_bits", thetas, entropy)]))


def run(command: str, config: RunConfig, spin: Spin = Spin.UP) -> Path:
    """Execute one command and return the written output path."""
    ext = config.format
    out = config.out if config.out is not None else Path(f"{command}.{ext}")
    if command == "xps":
        _run_xps(config, spin, out)
    elif command == "xepecs":
        _run_xepecs(config, out)
    elif command == "rho":
        _run_rho(config, out)
    elif command == "entropy":
        _run_entropy(config, out)
    else:
        raise ConfigError(f"command: unknown command {command!r}")
    return out


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xepecs",
        description="Coincidence spectra and spin-polarization entanglement "
                    "of the two-shell atomic model.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "xps": "spin-resolved core-level photoemission spectrum",
        "xepecs": "polarization- and spin-resolved emission spectra",
        "rho": "spin-polarization density matrix",
        "entropy": "entanglement entropy against emission angle",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=descriptions[name])
        p.add_argument("--config", metavar="PATH", default=None,
                       help="flat JSON config file (fallback: $XEPECS_CONFIG)")
        p.add_argument("--theta", metavar="DEG|START:END:STEP", default=None)
        p.add_argument("--phi", metavar="DEG", default=None)
        p.add_argument("--beta1", metavar="DEG", default=None)
        p.add_argument("--beta2", metavar="DEG", default=None)
        p.add_argument("--epsilon", metavar="EV|auto", default=None)
        p.add_argument("--out", metavar="PATH", default=None)
        p.add_argument("--format", choices=("csv", "json", "svg"), default=None)
        if name == "xps":
            p.add_argument("--spin", choices=("up", "down"), default="up")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = build_config(args)
        spin = Spin(args.spin) if getattr(args, "spin", None) else Spin.UP
        out = run(args.command, config, spin)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
