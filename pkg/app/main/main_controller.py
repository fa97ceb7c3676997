"""
Main Controller Module

Contains the simulation controller that coordinates the services for one
run command and turns failures into exit codes and localized messages.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from app.components.core_types import (
    Method,
    SpinorField,
    initial_state,
    l2_distance,
    make_grid,
    observables,
)
from app.services.analytic_oracle import (
    CERTIFICATE_BOUND,
    exact_state,
    residual_certificate,
    twist_rate,
)
from app.services.experiment import aperture_postselect, measurement_probability, sample_clicks, scan_hole
from app.services.export_manager import ExportManager
from app.services.integrator import StepReport, evolve
from app.services.spin_texture import fit_twist_rate, texture, twist_profile
from app.setup.simulation_config import SimulationConfig, check_ladders, to_dict
from app.setup.system_checker import SystemChecker
from app.utils.exceptions import ConfigError, IntegrationError, TwistError
from app.utils.translation_manager import tr

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_INTEGRATION = 3

# Halving dt divides a second-order error by 4.
SECOND_ORDER_RATIO = 4.0
RATIO_TOLERANCE = 0.8


class Command(str, Enum):
    SIMULATE = "simulate"
    TEXTURE = "texture"
    EXPERIMENT = "experiment"
    CONVERGE = "converge"


@dataclass
class RunResult:
    exit_code: int
    message: str
    files: List[Path] = field(default_factory=list)

    @property
    def success(self) -> bool:
        return self.exit_code == EXIT_OK


class SimulationController:
    """
    Runs one command against a validated SimulationConfig.

    This class handles:
    - Evolution of the initial state (shared by simulate/texture/experiment)
    - Export of every artifact with its metadata sidecar
    - The convergence ladder against the analytic oracle
    """

    def __init__(self, config: SimulationConfig, system_checker: Optional[SystemChecker] = None):
        self.config = config
        self.system_checker = system_checker or SystemChecker()
        self._initial: Optional[SpinorField] = None
        self._final: Optional[SpinorField] = None
        self._report: Optional[StepReport] = None

    # ==================== Entry point ====================

    def run(self, command) -> RunResult:
        command = Command(command)
        logger.info(
            "%s: method=%s dt=%g t_final=%g g=%g grid=[%g, %g]x%d",
            command.value, self.config.method, self.config.dt, self.config.t_final,
            self.config.gradient, self.config.grid.z_min, self.config.grid.z_max,
            self.config.grid.n_points,
        )
        handlers = {
            Command.SIMULATE: self.simulate,
            Command.TEXTURE: self.texture,
            Command.EXPERIMENT: self.experiment,
            Command.CONVERGE: self.converge,
        }
        try:
            files = handlers[command]()
        except IntegrationError as e:
            logger.error("integration failed at step %d", e.step_index)
            return RunResult(EXIT_INTEGRATION, tr("run.integration_failed", step=e.step_index, error=str(e)))
        except ConfigError as e:
            return RunResult(EXIT_CONFIG, tr("run.invalid_config", error=str(e)))
        except (TwistError, OSError) as e:
            logger.exception("run failed")
            return RunResult(EXIT_UNEXPECTED, tr("run.failed", error=str(e)))

        logger.info("%s finished, %d files written", command.value, len(files))
        return RunResult(EXIT_OK, tr("run.finished", command=command.value, count=len(files)), files)

    # ==================== Helpers ====================

    def _exporter(self, command: Command, scheme) -> ExportManager:
        metadata = {
            "command": command.value,
            "config": to_dict(self.config),
            "scheme": scheme,
            "versions": self.system_checker.get_versions(),
        }
        return ExportManager(self.config.output.dir, self.config.output.precision, metadata)

    def _log_progress(self, done: int, total: int):
        logger.debug("step %d/%d", done, total)

    def _evolve(self) -> Tuple[SpinorField, SpinorField, StepReport]:
        if self._final is None:
            cfg = self.config
            self._initial = initial_state(cfg.grid.build())
            self._final, self._report = evolve(
                self._initial, cfg.t_final, cfg.dt, cfg.gradient, cfg.method,
                progress_callback=self._log_progress,
            )
        return self._initial, self._final, self._report

    def _write_simulation(self, exporter: ExportManager) -> List[Path]:
        initial, final, report = self._evolve()
        g = self.config.gradient
        return [
            exporter.write_wavefunction("wavefunction_t0", initial),
            exporter.write_wavefunction("wavefunction_final", final),
            exporter.write_observables("observables", observables(initial, g), observables(final, g), report),
        ]

    # ==================== Commands ====================

    def simulate(self) -> List[Path]:
        return self._write_simulation(self._exporter(Command.SIMULATE, self.config.method))

    def texture(self) -> List[Path]:
        exporter = self._exporter(Command.TEXTURE, self.config.method)
        files = self._write_simulation(exporter)
        _, final, _ = self._evolve()

        samples = texture(final, self.config.epsilon)
        files.append(exporter.write_texture("texture", samples))

        profile = twist_profile(samples)
        try:
            fitted = fit_twist_rate(profile)
        except TwistError as e:
            logger.warning("no twist rate fit: %s", e)
            fitted = None
        logger.info(
            "twist rate: fitted %s, oracle %.6g",
            "n/a" if fitted is None else f"{fitted:.6g}",
            twist_rate(final.time, self.config.gradient),
        )
        files.append(exporter.write_twist("twist", profile, fitted))
        return files

    def experiment(self) -> List[Path]:
        aperture = self.config.experiment
        exporter = self._exporter(Command.EXPERIMENT, self.config.method)
        _, final, _ = self._evolve()

        rows = scan_hole(final, aperture.centers, aperture.half_width)
        files = [exporter.write_scan("scan", rows, aperture.half_width)]

        if aperture.shots > 0:
            rng = np.random.default_rng(aperture.seed)
            clicks = []
            for row in sorted(rows, key=lambda r: r.z_center):
                if not row.defined:
                    continue
                cond = aperture_postselect(final, row.z_center, aperture.half_width)
                p_up = measurement_probability(cond, aperture.axis)
                clicks.append((row.z_center, p_up, aperture.shots, sample_clicks(cond, aperture.axis, aperture.shots, rng)))
            files.append(exporter.write_clicks("clicks", clicks, aperture.axis, aperture.seed))
        return files

    def converge(self) -> List[Path]:
        cfg = self.config
        study = cfg.converge
        check_ladders(cfg)

        certificate = residual_certificate(cfg.gradient)
        if certificate > CERTIFICATE_BOUND:
            raise TwistError(tr("run.certificate_failed", residual=certificate, bound=CERTIFICATE_BOUND))

        jobs = []
        for name in study.methods:
            rungs = study.ladder(name)
            jobs.extend((Method(name), rungs.z_max, n, dt) for n in rungs.n_points for dt in rungs.dts)

        def run_rung(job):
            method, z_max, n_points, dt = job
            grid = make_grid(-z_max, z_max, n_points)
            final, _ = evolve(initial_state(grid), cfg.t_final, dt, cfg.gradient, method)
            error = l2_distance(final, exact_state(grid, cfg.t_final, cfg.gradient))
            logger.info("%s N=%d dt=%g: L2 error %.3e", method.value, n_points, dt, error)
            return method.value, dt, grid.dz, error

        with ThreadPoolExecutor(max_workers=study.workers) as pool:
            entries = sorted(pool.map(run_rung, jobs))

        extra = {
            "certificate_residual": certificate,
            "error_ratios": _error_ratios(entries),
        }
        exporter = self._exporter(Command.CONVERGE, list(study.methods))
        return [exporter.write_convergence("convergence", entries, extra)]


def _error_ratios(entries) -> Dict[str, List[float]]:
    """Successive error ratios e(dt) / e(dt/2) per (method, dz), coarse to fine."""
    ladders: Dict[str, List[Tuple[float, float]]] = {}
    for method, dt, dz, error in entries:
        ladders.setdefault(f"{method}@dz={dz:.6g}", []).append((dt, error))
    ratios = {}
    for key, ladder in ladders.items():
        ladder.sort(reverse=True)
        ratios[key] = [
            coarse[1] / fine[1] for coarse, fine in zip(ladder, ladder[1:]) if fine[1] > 0
        ]
        logger.info("%s error ratios: %s", key, ", ".join(f"{r:.3f}" for r in ratios[key]))
        off = [r for r in ratios[key] if abs(r - SECOND_ORDER_RATIO) > RATIO_TOLERANCE]
        if off:
            logger.warning(
                "%s: ratios %s are outside %.1f +/- %.1f; the ladder is not resolving second order",
                key, ", ".join(f"{r:.3f}" for r in off), SECOND_ORDER_RATIO, RATIO_TOLERANCE,
            )
    return ratios
