"""Experiment configuration: flat INI files with strict validation.

Every tunable of the toolkit lives in one config namespace, organized in
sections.  Loading applies defaults, file values, then command-line
overrides (section.key=value), validates every key by name, and fails
fast with a ConfigError that names the offending key.  A loaded config
serializes back to a normalized INI (floats via repr) so that identical
configurations produce identical files.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, fields
from importlib import resources

from .analytic import BreatherParams
from .errors import ConfigError, NumericsError
from .models import CubicKG, GrapheneSL, NonlinearityModel, SineGordon
from .solver import SimConfig, Grid1D

__all__ = [
    "ExperimentConfig",
    "load_config",
    "dump_config",
    "default_config_text",
    "build_model",
    "build_params",
    "build_grid",
    "build_sim",
    "replace",
    "packaged_config_path",
]

MODEL_KINDS = ("sine_gordon", "gsl", "cubic")
INITIAL_KINDS = ("approximate", "exact")

# Defaults reproduce the main superlattice experiment end to end.
_DEFAULTS: dict[str, dict[str, str]] = {
    "model": {"kind": "gsl", "b": "0.9", "beta": "0.1"},
    "breather": {"omega": "0.97", "v": "0.9", "initial": "approximate"},
    "grid": {"x_min": "-50.0", "x_max": "300.0", "dx": "0.05"},
    "time": {"dt": "0.025", "t_end": "250.0", "snapshot_every": "1000"},
    "solver": {"boundary": "dirichlet0", "probe_x": ""},
    "analysis": {"epsilon": "", "L": "10.0", "N": "200", "seed": "10", "cadence": "1"},
    "output": {"dir": "out", "wide_csv": "false", "svg": "false"},
    "sweep": {"omega": "", "b": "", "v": "", "max_points": "64", "workers": "1"},
}


@dataclass(frozen=True)
class ExperimentConfig:
    model_kind: str
    b: float
    beta: float
    omega: float
    v: float
    initial: str
    x_min: float
    x_max: float
    dx: float
    dt: float
    t_end: float
    snapshot_every: int
    boundary: str
    probe_x: tuple[float, ...]
    epsilon: float | None
    L: float
    N: int
    seed: int
    cadence: int
    out_dir: str
    wide_csv: bool
    svg: bool
    sweep_omega: tuple[float, ...]
    sweep_b: tuple[float, ...]
    sweep_v: tuple[float, ...]
    sweep_max_points: int
    sweep_workers: int


def _parse_float(raw: str, key: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {raw!r}") from None


def _parse_int(raw: str, key: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {raw!r}") from None


def _parse_bool(raw: str, key: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {raw!r}")


def _parse_float_list(raw: str, key: str) -> tuple[float, ...]:
    raw = raw.strip()
    if not raw:
        return ()
    return tuple(_parse_float(part.strip(), key) for part in raw.split(","))


def _parse_choice(raw: str, key: str, choices: tuple[str, ...]) -> str:
    low = raw.strip().lower()
    if low not in choices:
        raise ConfigError(f"{key}: expected one of {choices}, got {raw!r}")
    return low


def _read_parser(path: str | None, overrides: tuple[str, ...]) -> configparser.ConfigParser:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # keys are case-sensitive (analysis.L, analysis.N)
    cp.read_dict(_DEFAULTS)
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                cp.read_file(fh, source=path)
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path!r}: {exc}") from None
        except configparser.Error as exc:
            raise ConfigError(f"malformed config file {path!r}: {exc}") from None
    for section in cp.sections():
        if section not in _DEFAULTS:
            raise ConfigError(f"unknown config section [{section}]")
        for key in cp[section]:
            if key not in _DEFAULTS[section]:
                raise ConfigError(f"unknown config key {section}.{key}")
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form section.key=value")
        dotted, value = item.split("=", 1)
        if "." not in dotted:
            raise ConfigError(f"override {item!r} is not of the form section.key=value")
        section, key = dotted.split(".", 1)
        section, key = section.strip(), key.strip()
        if section not in _DEFAULTS or key not in _DEFAULTS[section]:
            raise ConfigError(f"override names unknown config key {section}.{key}")
        cp[section][key] = value.strip()
    return cp


def load_config(path: str | None = None, overrides: tuple[str, ...] = ()) -> ExperimentConfig:
    """Defaults, then the file, then overrides; validated end to end."""
    cp = _read_parser(path, overrides)
    eps_raw = cp["analysis"]["epsilon"].strip()
    cfg = ExperimentConfig(
        model_kind=_parse_choice(cp["model"]["kind"], "model.kind", MODEL_KINDS),
        b=_parse_float(cp["model"]["b"], "model.b"),
        beta=_parse_float(cp["model"]["beta"], "model.beta"),
        omega=_parse_float(cp["breather"]["omega"], "breather.omega"),
        v=_parse_float(cp["breather"]["v"], "breather.v"),
        initial=_parse_choice(cp["breather"]["initial"], "breather.initial", INITIAL_KINDS),
        x_min=_parse_float(cp["grid"]["x_min"], "grid.x_min"),
        x_max=_parse_float(cp["grid"]["x_max"], "grid.x_max"),
        dx=_parse_float(cp["grid"]["dx"], "grid.dx"),
        dt=_parse_float(cp["time"]["dt"], "time.dt"),
        t_end=_parse_float(cp["time"]["t_end"], "time.t_end"),
        snapshot_every=_parse_int(cp["time"]["snapshot_every"], "time.snapshot_every"),
        boundary=cp["solver"]["boundary"].strip().lower(),
        probe_x=_parse_float_list(cp["solver"]["probe_x"], "solver.probe_x"),
        epsilon=None if not eps_raw else _parse_float(eps_raw, "analysis.epsilon"),
        L=_parse_float(cp["analysis"]["L"], "analysis.L"),
        N=_parse_int(cp["analysis"]["N"], "analysis.N"),
        seed=_parse_int(cp["analysis"]["seed"], "analysis.seed"),
        cadence=_parse_int(cp["analysis"]["cadence"], "analysis.cadence"),
        out_dir=cp["output"]["dir"].strip(),
        wide_csv=_parse_bool(cp["output"]["wide_csv"], "output.wide_csv"),
        svg=_parse_bool(cp["output"]["svg"], "output.svg"),
        sweep_omega=_parse_float_list(cp["sweep"]["omega"], "sweep.omega"),
        sweep_b=_parse_float_list(cp["sweep"]["b"], "sweep.b"),
        sweep_v=_parse_float_list(cp["sweep"]["v"], "sweep.v"),
        sweep_max_points=_parse_int(cp["sweep"]["max_points"], "sweep.max_points"),
        sweep_workers=_parse_int(cp["sweep"]["workers"], "sweep.workers"),
    )
    _validate(cfg)
    return cfg


def _validate(cfg: ExperimentConfig) -> None:
    # Every module-level precondition a config can break is checked here,
    # by constructing the domain objects, so bad values fail at load time.
    def check(key: str, build):
        try:
            build()
        except (NumericsError, ValueError) as exc:
            raise ConfigError(f"{key}: {exc}") from None

    check("model.*", lambda: build_model(cfg))
    check("breather.*", lambda: build_params(cfg))
    check("grid.*", lambda: build_grid(cfg))
    check("time/solver/grid", lambda: build_sim(cfg))
    if cfg.initial == "exact" and cfg.model_kind != "sine_gordon":
        raise ConfigError("breather.initial: 'exact' is only available for model.kind = sine_gordon")
    if cfg.epsilon is not None and not cfg.epsilon > 0.0:
        raise ConfigError(f"analysis.epsilon: must be > 0 when given, got {cfg.epsilon}")
    if not cfg.L > 0.0:
        raise ConfigError(f"analysis.L: must be > 0, got {cfg.L}")
    if cfg.N < 2:
        raise ConfigError(f"analysis.N: must be >= 2, got {cfg.N}")
    if cfg.cadence < 1:
        raise ConfigError(f"analysis.cadence: must be >= 1, got {cfg.cadence}")
    if cfg.sweep_max_points < 1:
        raise ConfigError(f"sweep.max_points: must be >= 1, got {cfg.sweep_max_points}")
    if cfg.sweep_workers < 1:
        raise ConfigError(f"sweep.workers: must be >= 1, got {cfg.sweep_workers}")
    if cfg.sweep_b and cfg.model_kind != "gsl":
        raise ConfigError("sweep.b: sweeping b requires model.kind = gsl")
    if not cfg.out_dir:
        raise ConfigError("output.dir: must not be empty")


def build_model(cfg: ExperimentConfig) -> NonlinearityModel:
    if cfg.model_kind == "sine_gordon":
        return SineGordon()
    if cfg.model_kind == "gsl":
        return GrapheneSL(b=cfg.b)
    return CubicKG(beta=cfg.beta)


def build_params(cfg: ExperimentConfig) -> BreatherParams:
    return BreatherParams(omega=cfg.omega, v=cfg.v)


def build_grid(cfg: ExperimentConfig) -> Grid1D:
    return Grid1D.from_spacing(cfg.x_min, cfg.x_max, cfg.dx)


def build_sim(cfg: ExperimentConfig) -> SimConfig:
    return SimConfig(
        model=build_model(cfg),
        grid=build_grid(cfg),
        dt=cfg.dt,
        t_end=cfg.t_end,
        boundary=cfg.boundary,
        snapshot_every=cfg.snapshot_every,
        probe_x=cfg.probe_x,
    )


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ", ".join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def dump_config(cfg: ExperimentConfig) -> str:
    """Normalized INI text; load(dump(cfg)) reproduces cfg exactly."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    cp.read_dict(
        {
            "model": {"kind": cfg.model_kind, "b": _fmt(cfg.b), "beta": _fmt(cfg.beta)},
            "breather": {"omega": _fmt(cfg.omega), "v": _fmt(cfg.v), "initial": cfg.initial},
            "grid": {"x_min": _fmt(cfg.x_min), "x_max": _fmt(cfg.x_max), "dx": _fmt(cfg.dx)},
            "time": {
                "dt": _fmt(cfg.dt),
                "t_end": _fmt(cfg.t_end),
                "snapshot_every": _fmt(cfg.snapshot_every),
            },
            "solver": {"boundary": cfg.boundary, "probe_x": _fmt(cfg.probe_x)},
            "analysis": {
                "epsilon": _fmt(cfg.epsilon),
                "L": _fmt(cfg.L),
                "N": _fmt(cfg.N),
                "seed": _fmt(cfg.seed),
                "cadence": _fmt(cfg.cadence),
            },
            "output": {"dir": cfg.out_dir, "wide_csv": _fmt(cfg.wide_csv), "svg": _fmt(cfg.svg)},
            "sweep": {
                "omega": _fmt(cfg.sweep_omega),
                "b": _fmt(cfg.sweep_b),
                "v": _fmt(cfg.sweep_v),
                "max_points": _fmt(cfg.sweep_max_points),
                "workers": _fmt(cfg.sweep_workers),
            },
        }
    )
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def default_config_text() -> str:
    return dump_config(load_config())


def replace(cfg: ExperimentConfig, **changes) -> ExperimentConfig:
    """Validated copy-with-changes helper for sweeps and tests."""
    values = {f.name: getattr(cfg, f.name) for f in fields(ExperimentConfig)}
    values.update(changes)
    out = ExperimentConfig(**values)
    _validate(out)
    return out


def packaged_config_path(name: str) -> str:
    """Filesystem path of one of the shipped reference configs."""
    if not name.endswith(".cfg"):
        name = name + ".cfg"
    path = resources.files(__package__) / "configs" / name
    if not path.is_file():
        shipped = sorted(p.name for p in (resources.files(__package__) / "configs").iterdir())
        raise ConfigError(f"no shipped config named {name!r}; available: {shipped}")
    return str(path)
