"""
Simulation Config Module
Run configuration: a frozen dataclass tree parsed from a JSON document.

Every key is optional; missing keys take the defaults below. Unknown keys,
type mismatches and constraint violations raise ConfigError naming the
dotted field and, when it can be located, the document line.
"""

import json
import math
import re
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional, Tuple

from app.components.core_types import DEFAULT_GRADIENT, DEFAULT_N_POINTS, DEFAULT_Z_MAX, Method, make_grid
from app.utils.exceptions import ConfigError, InvalidParameter
from app.utils.translation_manager import tr


def _default_centers() -> Tuple[float, ...]:
    return tuple(-4.0 + 0.5 * k for k in range(17))


@dataclass(frozen=True)
class GridSpec:
    z_min: float = -DEFAULT_Z_MAX
    z_max: float = DEFAULT_Z_MAX
    n_points: int = DEFAULT_N_POINTS

    def build(self):
        return make_grid(self.z_min, self.z_max, self.n_points)


@dataclass(frozen=True)
class OutputSpec:
    dir: str = "output"
    precision: int = 17


@dataclass(frozen=True)
class ExperimentSpec:
    centers: Tuple[float, ...] = field(default_factory=_default_centers)
    half_width: float = 0.25
    axis: Tuple[float, float, float] = (1.0, 0.0, 0.0)
    shots: int = 0
    seed: int = 0


@dataclass(frozen=True)
class LadderSpec:
    """One method's refinement ladder on its own domain [-z_max, z_max]."""

    z_max: float
    n_points: Tuple[int, ...]
    dts: Tuple[float, ...]


# The spectral ladder needs room so nothing reaches the boundary by t = 1; the
# implicit one needs dz small enough that its O(dz^2) dispersion sits below
# the O(dt^2) error it measures.
SPECTRAL_LADDER = LadderSpec(z_max=16.0, n_points=(2048,), dts=(4e-3, 2e-3, 1e-3))
IMPLICIT_LADDER = LadderSpec(z_max=12.0, n_points=(8192,), dts=(0.1, 0.05, 0.025))


@dataclass(frozen=True)
class ConvergeSpec:
    methods: Tuple[str, ...] = (Method.SPECTRAL.value, Method.IMPLICIT.value)
    spectral: LadderSpec = field(default_factory=lambda: SPECTRAL_LADDER)
    implicit: LadderSpec = field(default_factory=lambda: IMPLICIT_LADDER)
    workers: int = 1

    def ladder(self, method: str) -> LadderSpec:
        return getattr(self, Method(method).value)


@dataclass(frozen=True)
class SimulationConfig:
    grid: GridSpec = field(default_factory=GridSpec)
    dt: float = 1e-4
    t_final: float = 1.0
    gradient: float = DEFAULT_GRADIENT
    method: str = Method.SPECTRAL.value
    epsilon: float = 1e-6
    language: str = "en"
    output: OutputSpec = field(default_factory=OutputSpec)
    experiment: ExperimentSpec = field(default_factory=ExperimentSpec)
    converge: ConvergeSpec = field(default_factory=ConvergeSpec)


def to_dict(config: SimulationConfig) -> Dict[str, Any]:
    """JSON-ready echo of a config (tuples become lists)."""
    return json.loads(json.dumps(asdict(config)))


class _Reader:
    """Typed access to a parsed document with field/line diagnostics."""

    def __init__(self, text: str = ""):
        self.text = text

    def line_of(self, path: str) -> Optional[int]:
        position = 0
        found = None
        for part in path.split("."):
            match = re.compile(r'"%s"\s*:' % re.escape(part.split("[")[0])).search(self.text, position)
            if match is None:
                return found
            position = match.start()
            found = self.text.count("\n", 0, position) + 1
        return found

    def line_of_repeat(self, key: str) -> Optional[int]:
        """Line of the second occurrence of `key` in the document."""
        matches = list(re.finditer(r'"%s"\s*:' % re.escape(key), self.text))
        if len(matches) < 2:
            return None
        return self.text.count("\n", 0, matches[1].start()) + 1

    def fail(self, path: str, key: str, **kwargs):
        raise ConfigError(path, tr(f"config.errors.{key}", **kwargs), self.line_of(path))

    def number(self, value, path: str) -> float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(path, "type_mismatch", expected="number", actual=type(value).__name__)
        if not math.isfinite(value):
            self.fail(path, "constraint", rule="finite")
        return float(value)

    def integer(self, value, path: str) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            self.fail(path, "type_mismatch", expected="integer", actual=type(value).__name__)
        return value

    def string(self, value, path: str) -> str:
        if not isinstance(value, str):
            self.fail(path, "type_mismatch", expected="string", actual=type(value).__name__)
        return value

    def array(self, value, path: str, item) -> tuple:
        if not isinstance(value, list):
            self.fail(path, "type_mismatch", expected="array", actual=type(value).__name__)
        return tuple(item(v, f"{path}[{k}]") for k, v in enumerate(value))

    def section(self, value, path: str, allowed) -> Dict[str, Any]:
        if not isinstance(value, dict):
            self.fail(path or "<root>", "type_mismatch", expected="object", actual=type(value).__name__)
        for key in value:
            if key not in allowed:
                name = f"{path}.{key}" if path else key
                self.fail(name, "unknown_key")
        return value


def _field_names(cls) -> Tuple[str, ...]:
    return tuple(cls.__dataclass_fields__)


def _load_document(text: str) -> Dict[str, Any]:
    if not text.strip():
        return {}

    def reject_duplicates(pairs):
        seen = {}
        for key, value in pairs:
            if key in seen:
                raise ConfigError(key, tr("config.errors.duplicate_key"), _Reader(text).line_of_repeat(key))
            seen[key] = value
        return seen

    try:
        return json.loads(text, object_pairs_hook=reject_duplicates)
    except json.JSONDecodeError as e:
        raise ConfigError("<document>", tr("config.errors.syntax", error=e.msg), e.lineno) from None


def config_from_dict(data: Dict[str, Any], text: str = "") -> SimulationConfig:
    """Validate a decoded document; `text` only serves line lookups."""
    r = _Reader(text)
    top = r.section(data, "", _field_names(SimulationConfig))

    g = r.section(top.get("grid", {}), "grid", _field_names(GridSpec))
    grid = GridSpec(
        z_min=r.number(g.get("z_min", GridSpec.z_min), "grid.z_min"),
        z_max=r.number(g.get("z_max", GridSpec.z_max), "grid.z_max"),
        n_points=r.integer(g.get("n_points", GridSpec.n_points), "grid.n_points"),
    )
    try:
        grid.build()
    except InvalidParameter as e:
        field_name = "grid.n_points" if "n_points" in str(e) else "grid.z_max"
        r.fail(field_name, "constraint", rule=str(e))

    dt = r.number(top.get("dt", SimulationConfig.dt), "dt")
    if dt <= 0:
        r.fail("dt", "constraint", rule="dt > 0")
    t_final = r.number(top.get("t_final", SimulationConfig.t_final), "t_final")
    if t_final < 0:
        r.fail("t_final", "constraint", rule="t_final >= 0")
    if not _is_multiple(t_final, dt):
        r.fail("t_final", "constraint", rule="t_final is an integer multiple of dt")

    gradient = r.number(top.get("gradient", SimulationConfig.gradient), "gradient")
    method = r.string(top.get("method", SimulationConfig.method), "method")
    if method not in {m.value for m in Method}:
        r.fail("method", "constraint", rule="spectral | implicit")
    epsilon = r.number(top.get("epsilon", SimulationConfig.epsilon), "epsilon")
    if not 0 < epsilon <= 1:
        r.fail("epsilon", "constraint", rule="0 < epsilon <= 1")
    language = r.string(top.get("language", SimulationConfig.language), "language")

    o = r.section(top.get("output", {}), "output", _field_names(OutputSpec))
    output = OutputSpec(
        dir=r.string(o.get("dir", OutputSpec.dir), "output.dir"),
        precision=r.integer(o.get("precision", OutputSpec.precision), "output.precision"),
    )
    if not output.dir:
        r.fail("output.dir", "constraint", rule="non-empty path")
    if not 1 <= output.precision <= 17:
        r.fail("output.precision", "constraint", rule="1 <= precision <= 17")

    e = r.section(top.get("experiment", {}), "experiment", _field_names(ExperimentSpec))
    defaults = ExperimentSpec()
    experiment = ExperimentSpec(
        centers=r.array(e["centers"], "experiment.centers", r.number) if "centers" in e else defaults.centers,
        half_width=r.number(e.get("half_width", defaults.half_width), "experiment.half_width"),
        axis=r.array(e["axis"], "experiment.axis", r.number) if "axis" in e else defaults.axis,
        shots=r.integer(e.get("shots", defaults.shots), "experiment.shots"),
        seed=r.integer(e.get("seed", defaults.seed), "experiment.seed"),
    )
    if experiment.half_width <= 0:
        r.fail("experiment.half_width", "constraint", rule="half_width > 0")
    if len(experiment.axis) != 3 or abs(math.sqrt(sum(a * a for a in experiment.axis)) - 1.0) > 1e-9:
        r.fail("experiment.axis", "constraint", rule="unit 3-vector")
    if experiment.shots < 0:
        r.fail("experiment.shots", "constraint", rule="shots >= 0")
    if experiment.seed < 0:
        r.fail("experiment.seed", "constraint", rule="seed >= 0")

    c = r.section(top.get("converge", {}), "converge", _field_names(ConvergeSpec))
    cdefaults = ConvergeSpec()
    methods = r.array(c["methods"], "converge.methods", r.string) if "methods" in c else cdefaults.methods
    for k, value in enumerate(methods):
        if value not in {m.value for m in Method}:
            r.fail(f"converge.methods[{k}]", "constraint", rule="spectral | implicit")
    converge = ConvergeSpec(
        methods=methods,
        spectral=_ladder(r, c, "spectral", cdefaults.spectral),
        implicit=_ladder(r, c, "implicit", cdefaults.implicit),
        workers=r.integer(c.get("workers", cdefaults.workers), "converge.workers"),
    )
    if converge.workers < 1:
        r.fail("converge.workers", "constraint", rule="workers >= 1")

    return SimulationConfig(
        grid=grid,
        dt=dt,
        t_final=t_final,
        gradient=gradient,
        method=method,
        epsilon=epsilon,
        language=language,
        output=output,
        experiment=experiment,
        converge=converge,
    )


def _ladder(r: _Reader, section: Dict[str, Any], method: str, default: LadderSpec) -> LadderSpec:
    path = f"converge.{method}"
    d = r.section(section.get(method, {}), path, _field_names(LadderSpec))
    ladder = LadderSpec(
        z_max=r.number(d.get("z_max", default.z_max), f"{path}.z_max"),
        n_points=r.array(d["n_points"], f"{path}.n_points", r.integer) if "n_points" in d else default.n_points,
        dts=r.array(d["dts"], f"{path}.dts", r.number) if "dts" in d else default.dts,
    )
    if not ladder.n_points:
        r.fail(f"{path}.n_points", "constraint", rule="at least one grid size")
    for k, value in enumerate(ladder.n_points):
        try:
            make_grid(-ladder.z_max, ladder.z_max, value)
        except InvalidParameter as err:
            name = f"{path}.n_points[{k}]" if "n_points" in str(err) else f"{path}.z_max"
            r.fail(name, "constraint", rule=str(err))
    if not ladder.dts:
        r.fail(f"{path}.dts", "constraint", rule="at least one dt")
    for k, value in enumerate(ladder.dts):
        if value <= 0:
            r.fail(f"{path}.dts[{k}]", "constraint", rule="dt > 0")
    return ladder


def check_ladders(config: SimulationConfig) -> None:
    """Raise ConfigError unless every converge step divides t_final.

    Checked when the study runs, so other commands accept any t_final.
    """
    for method in config.converge.methods:
        for k, dt in enumerate(config.converge.ladder(method).dts):
            if not _is_multiple(config.t_final, dt):
                name = f"converge.{method}.dts[{k}]"
                raise ConfigError(name, tr("config.errors.constraint", rule="dt dividing t_final"))


def _is_multiple(t_final: float, dt: float) -> bool:
    if dt <= 0:
        return False
    return abs(round(t_final / dt) * dt - t_final) <= 1e-12


def parse_config(text: str) -> SimulationConfig:
    """Parse a JSON config document; blank text gives the default config."""
    return config_from_dict(_load_document(text), text)
