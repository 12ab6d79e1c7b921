"""
Run configuration

Reads the line-oriented `[section]` / `key = value` documents that drive the
command line, applies presets and defaults, and validates everything before a
run starts.

Example usage:
    >>> cfg = parse_config('''
    ... [model]
    ... preset = paper-fig3
    ... k32 = 2
    ... ''')
    >>> cfg.model.k32
    2.0
"""

__all__ = [
    "RunConfig",
    "OdeOptions",
    "SweepOptions",
    "OutputOptions",
    "PRESETS",
    "parse_config",
    "load_config",
]

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional

from py_turing_lab.__about__ import VERSION
from py_turing_lab.constants import (
    DEFAULT_LATTICE_LX,
    DEFAULT_LATTICE_LY,
    DEFAULT_LATTICE_M_MAX,
    DEFAULT_LATTICE_N_MAX,
    DEFAULT_ODE_DT,
    DEFAULT_ODE_T_END,
    DEFAULT_SWEEP_WORKERS,
    DEFAULT_THRESHOLD_HI,
    DEFAULT_THRESHOLD_LO,
    DEFAULT_THRESHOLD_TOL,
)
from py_turing_lab.exceptions import ParseError, ValidationError
from py_turing_lab.grid import Grid, SimConfig
from py_turing_lab.helpers import format_float, parse_float_list
from py_turing_lab.model import COEFFICIENTS, ModelParams
from py_turing_lab.solvers.linear_stability import SWEEPABLE, admissible_wavenumbers

py_turing_lab_logger = logging.getLogger("py_turing_lab")

SECTION_PATTERN = re.compile(r"^\[\s*([A-Za-z_][\w-]*)\s*\]$")
ENTRY_PATTERN = re.compile(r"^([A-Za-z_][\w-]*)\s*=\s*(.*)$")

MU_DOMAINS = ("lattice", "continuous")
RASTERS = ("p2", "p5", "none")

STANDARD_MODEL = {
    "a": "1",
    "b": "1",
    "c": "0.1",
    "d": "0.1",
    "e": "0.1",
    "k11": "0.1",
    "k13": "0.1",
    "k22": "0.1",
    "k23": "0.1",
    "k31": "0.1",
    "k33": "0.1",
}
STANDARD_GRID = {"nx": "100", "ny": "100", "dx": "1", "dy": "1"}
STANDARD_SIM = {"dt": "0.005", "steps": "40000"}


def _spot_run(k32: str) -> dict:
    return {
        "model": {**STANDARD_MODEL, "k32": k32},
        "grid": STANDARD_GRID,
        "sim": STANDARD_SIM,
    }


# Preset values are text so they pass through the same converters as a document.
PRESETS: dict[str, dict[str, dict[str, str]]] = {
    "paper-fig3": {"model": STANDARD_MODEL},
    "fig1": {
        "model": {**STANDARD_MODEL, "k32": "2"},
        "sweep": {
            "parameter": "k32",
            "values": "0.5:2.5:41",
            "lx": "40",
            "ly": "40",
            "m_max": "50",
            "n_max": "50",
            "mu_domain": "lattice",
        },
    },
    "fig2": {
        "model": {**STANDARD_MODEL, "k32": "2"},
        "grid": STANDARD_GRID,
        "sim": STANDARD_SIM,
        "sweep": {"parameter": "k32", "values": "1.0:2.0:11"},
    },
    "fig3-k17": _spot_run("1.7"),
    "fig3-k18": _spot_run("1.8"),
    "fig3-k19": _spot_run("1.9"),
    "fig3-k20": _spot_run("2"),
}


@dataclass(frozen=True)
class OdeOptions:
    u0: tuple[float, float, float] = (0.5, 0.5, 0.5)
    t_end: float = DEFAULT_ODE_T_END
    dt: float = DEFAULT_ODE_DT

    def __post_init__(self):
        if len(self.u0) != 3 or not all(v >= 0.0 for v in self.u0):
            raise ValidationError(
                "ode_u0 needs three nonnegative densities", reason="ode_u0"
            )
        if not self.dt > 0.0:
            raise ValidationError("ode_dt must be > 0", reason="ode_dt")
        if self.t_end < self.dt:
            raise ValidationError("ode_t_end must be >= ode_dt", reason="ode_t_end")


@dataclass(frozen=True)
class SweepOptions:
    parameter: str = "k32"
    values: tuple[float, ...] = (1.7, 1.8, 1.9, 2.0)
    lo: float = DEFAULT_THRESHOLD_LO
    hi: float = DEFAULT_THRESHOLD_HI
    tol: float = DEFAULT_THRESHOLD_TOL
    lx: float = DEFAULT_LATTICE_LX
    ly: float = DEFAULT_LATTICE_LY
    m_max: int = DEFAULT_LATTICE_M_MAX
    n_max: int = DEFAULT_LATTICE_N_MAX
    mu_domain: str = "lattice"
    workers: int = DEFAULT_SWEEP_WORKERS

    def __post_init__(self):
        if self.parameter not in SWEEPABLE:
            raise ValidationError(
                f"sweep parameter must be one of {', '.join(SWEEPABLE)}",
                reason="parameter",
            )
        if not self.values:
            raise ValidationError("sweep values must not be empty", reason="values")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValidationError("sweep values must be increasing", reason="values")
        if any(v < 0.0 for v in self.values):
            raise ValidationError(
                "cross-diffusion values must be >= 0", reason="values"
            )
        if not 0.0 <= self.lo < self.hi:
            raise ValidationError("threshold bracket needs 0 <= lo < hi", reason="lo")
        if not self.tol > 0.0:
            raise ValidationError("tol must be > 0", reason="tol")
        if self.lx <= 0.0 or self.ly <= 0.0:
            raise ValidationError("lattice lengths must be > 0", reason="lx")
        if self.m_max < 0 or self.n_max < 0:
            raise ValidationError("lattice mode counts must be >= 0", reason="m_max")
        if self.mu_domain not in MU_DOMAINS:
            raise ValidationError(
                f"mu_domain must be one of {', '.join(MU_DOMAINS)}", reason="mu_domain"
            )
        if self.workers < 1:
            raise ValidationError("workers must be positive", reason="workers")

    def lattice(self):
        return admissible_wavenumbers(self.lx, self.ly, self.m_max, self.n_max)

    def threshold_lattice(self):
        """Wavenumbers for the threshold: None means the continuum"""
        return self.lattice() if self.mu_domain == "lattice" else None


@dataclass(frozen=True)
class OutputOptions:
    directory: str = "output"
    raster: str = "p5"
    dump: bool = False

    def __post_init__(self):
        if self.raster not in RASTERS:
            raise ValidationError(
                f"raster must be one of {', '.join(RASTERS)}", reason="raster"
            )


@dataclass(frozen=True)
class RunConfig:
    model: ModelParams
    grid: Grid = field(default_factory=lambda: Grid(100, 100))
    sim: SimConfig = field(default_factory=SimConfig)
    ode: OdeOptions = field(default_factory=OdeOptions)
    sweep: SweepOptions = field(default_factory=SweepOptions)
    output: OutputOptions = field(default_factory=OutputOptions)
    preset: Optional[str] = None

    @property
    def output_dir(self) -> Path:
        return Path(self.output.directory)

    def to_text(self) -> str:
        """The configuration as a document that `parse_config` reads back unchanged"""
        f = format_float
        sections = {
            "model": {
                **({"preset": self.preset} if self.preset else {}),
                **{name: f(getattr(self.model, name)) for name in COEFFICIENTS},
            },
            "grid": {
                "nx": str(self.grid.nx),
                "ny": str(self.grid.ny),
                "dx": f(self.grid.dx),
                "dy": f(self.grid.dy),
            },
            "sim": {
                "dt": f(self.sim.dt),
                "steps": str(self.sim.steps),
                "snapshot_every": str(self.sim.snapshot_every),
                "seed": str(self.sim.seed),
                "perturb_amplitude": f(self.sim.perturb_amplitude),
                "scheme": self.sim.scheme,
                "picard_tol": f(self.sim.picard_tol),
                "picard_max_iters": str(self.sim.picard_max_iters),
                "progress_every": str(self.sim.progress_every),
                "ode_u0": ", ".join(f(v) for v in self.ode.u0),
                "ode_t_end": f(self.ode.t_end),
                "ode_dt": f(self.ode.dt),
            },
            "sweep": {
                "parameter": self.sweep.parameter,
                "values": ", ".join(f(v) for v in self.sweep.values),
                "lo": f(self.sweep.lo),
                "hi": f(self.sweep.hi),
                "tol": f(self.sweep.tol),
                "lx": f(self.sweep.lx),
                "ly": f(self.sweep.ly),
                "m_max": str(self.sweep.m_max),
                "n_max": str(self.sweep.n_max),
                "mu_domain": self.sweep.mu_domain,
                "workers": str(self.sweep.workers),
            },
            "output": {
                "directory": self.output.directory,
                "raster": self.output.raster,
                "dump": "true" if self.output.dump else "false",
                "version": VERSION,
            },
        }
        blocks = []
        for section, entries in sections.items():
            lines = [f"[{section}]"]
            lines.extend(f"{key} = {value}" for key, value in entries.items())
            blocks.append("\n".join(lines))
        return "\n\n".join(blocks) + "\n"


def _to_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _to_int(text: str) -> int:
    return int(text.strip())


def _to_float(text: str) -> float:
    return float(text.strip())


def _to_str(text: str) -> str:
    return text.strip()


def _to_floats(text: str) -> tuple[float, ...]:
    return tuple(parse_float_list(text))


SCHEMA: dict[str, dict[str, Callable[[str], Any]]] = {
    "model": {"preset": _to_str, **{name: _to_float for name in COEFFICIENTS}},
    "grid": {"nx": _to_int, "ny": _to_int, "dx": _to_float, "dy": _to_float},
    "sim": {
        "dt": _to_float,
        "steps": _to_int,
        "snapshot_every": _to_int,
        "seed": _to_int,
        "perturb_amplitude": _to_float,
        "scheme": _to_str,
        "picard_tol": _to_float,
        "picard_max_iters": _to_int,
        "progress_every": _to_int,
        "ode_u0": _to_floats,
        "ode_t_end": _to_float,
        "ode_dt": _to_float,
    },
    "sweep": {
        "parameter": _to_str,
        "values": _to_floats,
        "lo": _to_float,
        "hi": _to_float,
        "tol": _to_float,
        "lx": _to_float,
        "ly": _to_float,
        "m_max": _to_int,
        "n_max": _to_int,
        "mu_domain": _to_str,
        "workers": _to_int,
    },
    "output": {
        "directory": _to_str,
        "raster": _to_str,
        "dump": _to_bool,
        "version": _to_str,
    },
}


def _read_entries(text: str) -> dict[str, dict[str, tuple[str, Optional[int]]]]:
    """Split a document into {section: {key: (raw value, line number)}}"""
    entries: dict[str, dict[str, tuple[str, Optional[int]]]] = {}
    section = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(("#", ";")):
            continue
        header = SECTION_PATTERN.match(line)
        if header:
            section = header.group(1).lower()
            if section not in SCHEMA:
                raise ValidationError(
                    f"line {number}: unknown section [{section}]", reason="section"
                )
            entries.setdefault(section, {})
            continue
        entry = ENTRY_PATTERN.match(line)
        if entry is None:
            py_turing_lab_logger.error("Unreadable configuration line %d", number)
            raise ParseError(
                f"line {number}: expected '[section]' or 'key = value'", line=number
            )
        if section is None:
            raise ParseError(
                f"line {number}: entry before any [section] header", line=number
            )
        key, value = entry.group(1).lower(), entry.group(2)
        if key in entries[section]:
            first = entries[section][key][1]
            py_turing_lab_logger.error(
                "Duplicate key %s in [%s] on lines %s and %d",
                key,
                section,
                first,
                number,
            )
            raise ParseError(
                f"line {number}: duplicate key '{key}' in [{section}], "
                f"first set on line {first}",
                line=number,
                first_line=first,
            )
        if key not in SCHEMA[section]:
            raise ValidationError(
                f"line {number}: unknown key '{key}' in [{section}]", reason=key
            )
        entries[section][key] = (value, number)
    return entries


def _convert(section: str, entries: dict) -> dict[str, Any]:
    converted = {}
    for key, (raw, number) in entries.items():
        try:
            converted[key] = SCHEMA[section][key](raw)
        except ValueError as err:
            where = f"line {number}" if number is not None else "preset"
            raise ParseError(
                f"{where}: bad value for {section}.{key}: {err}", line=number
            )
    return converted


def parse_config(text: str) -> RunConfig:
    """
    Parse and validate a configuration document.

    Raises:
        ParseError: for unreadable lines, bad values and duplicate keys
        ValidationError: for unknown names, missing sections and broken invariants
    """
    entries = _read_entries(text)
    if "model" not in entries:
        raise ValidationError("a [model] section is required", reason="model")

    preset = None
    if "preset" in entries["model"]:
        preset = entries["model"].pop("preset")[0].strip()
        if preset not in PRESETS:
            raise ValidationError(
                f"unknown preset {preset!r}; choose from {', '.join(PRESETS)}",
                reason="preset",
            )
        for section, values in PRESETS[preset].items():
            merged = {key: (value, None) for key, value in values.items()}
            merged.update(entries.get(section, {}))
            entries[section] = merged

    values = {
        section: _convert(section, entries.get(section, {})) for section in SCHEMA
    }

    model = ModelParams.from_dict(values["model"]).validate()

    grid = Grid(**{"nx": 100, "ny": 100, **values["grid"]})

    sim_values = dict(values["sim"])
    ode = OdeOptions(
        **{
            name: sim_values.pop(f"ode_{name}")
            for name in ("u0", "t_end", "dt")
            if f"ode_{name}" in sim_values
        }
    )
    sim = SimConfig(**sim_values)

    output_values = dict(values["output"])
    version = output_values.pop("version", VERSION)
    if version != VERSION:
        py_turing_lab_logger.warning(
            "Configuration was written by py_turing_lab %s; this is %s",
            version,
            VERSION,
        )

    return RunConfig(
        model=model,
        grid=grid,
        sim=sim,
        ode=ode,
        sweep=SweepOptions(**values["sweep"]),
        output=OutputOptions(**output_values),
        preset=preset,
    )


def load_config(path: Path) -> RunConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))
