"""
System Checker Module
Reports the numerical stack versions and manages the run configuration file.
"""

import json
import logging
import platform
from importlib import metadata
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from app.setup.simulation_config import SimulationConfig, config_from_dict, parse_config, to_dict

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_FILE = Path(__file__).parent.parent.parent / "simulation_config.json"


class SystemChecker:
    """Checks that the numerical libraries are importable and reports versions."""

    def __init__(self):
        self.packages = ["numpy", "scipy", "numba"]

    def get_versions(self) -> Dict[str, str]:
        """Versions of python, the app and each numerical package ("missing" if absent)."""
        from app import __version__

        versions = {"python": platform.python_version(), "twist": __version__}
        for package in self.packages:
            try:
                versions[package] = metadata.version(package)
            except metadata.PackageNotFoundError:
                versions[package] = "missing"
        return versions

    def check_dependencies(self) -> Tuple[bool, str, Dict[str, str]]:
        """(ok, message key, message arguments) in the style of the setup checks."""
        missing = [name for name, version in self.get_versions().items() if version == "missing"]
        if missing:
            return False, "setup.dependencies_missing", {"packages": ", ".join(missing)}
        return True, "setup.dependencies_ok", {}


class ConfigManager:
    """Loads, overrides and saves the simulation configuration."""

    def __init__(self, config_file: Optional[Union[str, Path]] = None):
        self.config_file = Path(config_file) if config_file else DEFAULT_CONFIG_FILE
        self.explicit = config_file is not None
        self.config = self._load_config()

    def _load_config(self) -> SimulationConfig:
        """Parse the config file; a missing default file means the default config.

        ConfigError propagates so the CLI can report the field and line.
        """
        if not self.config_file.exists():
            if self.explicit:
                raise FileNotFoundError(self.config_file)
            logger.debug("no %s, using defaults", self.config_file)
            return SimulationConfig()

        text = self.config_file.read_text(encoding="utf-8")
        logger.info("loaded config %s", self.config_file)
        return parse_config(text)

    def apply_overrides(self, **overrides: Any) -> SimulationConfig:
        """Re-validate the config with command-line overrides (None values are skipped).

        Accepted keys: method, dt, t_final, gradient, seed, out_dir.
        """
        data = to_dict(self.config)
        for key, value in overrides.items():
            if value is None:
                continue
            if key == "seed":
                data["experiment"]["seed"] = value
            elif key == "out_dir":
                data["output"]["dir"] = str(value)
            elif key in ("method", "dt", "t_final", "gradient"):
                data[key] = value
            else:
                raise KeyError(key)
        self.config = config_from_dict(data)
        return self.config

    def save_config(self, path: Optional[Union[str, Path]] = None) -> bool:
        """Save configuration to file."""
        target = Path(path) if path else self.config_file
        try:
            with open(target, "w", encoding="utf-8") as f:
                json.dump(to_dict(self.config), f, indent=2, sort_keys=True)
                f.write("\n")
            return True
        except OSError as e:
            logger.error("could not save config to %s: %s", target, e)
            return False
