"""Configuration management for the ptcoupler-hom simulator"""
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import yaml
from dotenv import load_dotenv

from exceptions import ConfigurationError, PtCouplerException
from models.coupler import (
    DEFAULT_SAMPLE_AMPLITUDES,
    SystemKind,
    balanced_length,
    gamma_from_amplitude,
)
from services.fock_evolution import Normalization, SourceModel

logger = logging.getLogger(__name__)

VERSION = "1.0.0"

ENV_PREFIX = "PTC_"

# Figure pipelines and the theory curve each one reproduces
SUPPORTED_FIGURES = {
    "fig2b": "Eigenvalue spectrum of the lossy coupler across the exceptional point",
    "fig3bcd": "Post-selected two-photon outcome probabilities versus loss",
    "fig3e": "HOM traces of the bare lossy coupler",
    "fig4b": "HOM traces of the sandwiched coupler",
    "fig4c": "HOM visibility of bare and sandwiched coupler versus loss/coupling",
}

# Keys accepted in a config file; flags use the same names with '-' for '_'
CONFIG_KEYS = (
    "kind",
    "kappa",
    "length",
    "gamma_grid",
    "gamma_max",
    "gamma_points",
    "delay_grid",
    "delay_max",
    "delay_points",
    "tau_c",
    "v_max",
    "accidentals",
    "normalization",
    "figure_id",
    "idealized",
    "length_tolerance",
    "sample_amplitudes",
    "max_workers",
    "log_level",
)

# Dense loss/coupling grid for the visibility and spectrum figures
RATIO_GRID_MAX = 2.4
RATIO_GRID_POINTS = 201


class SimulatorConfig:
    """Configuration class for the simulator.

    Precedence, lowest first: defaults, environment (PTC_*), config file, overrides.
    """

    def __init__(
        self,
        config_path: Optional[str] = None,
        overrides: Optional[Dict[str, Any]] = None,
    ):
        load_dotenv()

        # Device (calibrated mode defaults: kappa = 0.26 1/cm, 21 mm coupler)
        self.kind = self._get_env_with_default("KIND", SystemKind.BARE.value)
        self.kappa = self._get_env_with_default("KAPPA", "0.26")
        self.length = self._get_env_with_default("LENGTH", "2.1")
        self.idealized = self._get_env_with_default("IDEALIZED", "false")
        self.length_tolerance = self._get_env_with_default("LENGTH_TOLERANCE", "0")

        # Loss grid
        self.gamma_grid: Optional[List[float]] = None
        self.gamma_max = os.getenv(ENV_PREFIX + "GAMMA_MAX")
        self.gamma_points = self._get_env_with_default("GAMMA_POINTS", "8")
        self.sample_amplitudes: Any = list(DEFAULT_SAMPLE_AMPLITUDES)

        # Delay grid in ps
        self.delay_grid: Optional[List[float]] = None
        self.delay_max = self._get_env_with_default("DELAY_MAX", "0.8")
        self.delay_points = self._get_env_with_default("DELAY_POINTS", "161")

        # Source (fitted to the published dip widths, not measured values)
        self.tau_c = self._get_env_with_default("TAU_C", "0.15")
        self.v_max = self._get_env_with_default("VMAX", "0.95")
        self.accidentals = self._get_env_with_default("ACCIDENTALS", "0")

        self.normalization = self._get_env_with_default(
            "NORMALIZATION", Normalization.NONE.value
        )
        self.figure_id: Optional[str] = os.getenv(ENV_PREFIX + "FIGURE_ID")
        self.max_workers = self._get_env_with_default("MAX_WORKERS", "1")
        self.log_level = self._get_env_with_default("LOG_LEVEL", "WARNING")

        # Keys set by the config file or overrides rather than defaults/env
        self.explicit_keys: set[str] = set()
        self.config_path = Path(config_path) if config_path else None
        if self.config_path is not None:
            self._apply(self._read_config_file(self.config_path), str(self.config_path))
        if overrides:
            self._apply(overrides, "overrides")

        self._coerce()
        self._validate_config()

    def _get_env_with_default(self, key: str, default: str) -> str:
        """Get environment variable with default value"""
        return os.getenv(ENV_PREFIX + key, default).strip()

    def _read_config_file(self, path: Path) -> Dict[str, Any]:
        """Parse a flat 'key: value' YAML file"""
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f)
        except OSError as e:
            raise ConfigurationError(f"Cannot read config file {path}: {e}") from e
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Malformed config file {path}: {e}") from e

        if data is None:
            return {}
        if not isinstance(data, dict):
            raise ConfigurationError(
                f"Config file {path} must contain one 'key: value' per line"
            )
        logger.info(f"Loaded {len(data)} settings from {path}")
        return data

    def _apply(self, values: Dict[str, Any], source: str) -> None:
        unknown = sorted(set(values) - set(CONFIG_KEYS))
        if unknown:
            raise ConfigurationError(
                f"Unknown config keys in {source}: {', '.join(unknown)}. "
                f"Allowed: {', '.join(CONFIG_KEYS)}"
            )
        for key, value in values.items():
            if value is not None:
                setattr(self, key, value)
                self.explicit_keys.add(key)

    def _coerce(self) -> None:
        """Convert raw strings/YAML scalars to typed values"""
        try:
            self.kind = SystemKind(str(self.kind).strip().lower())
            self.normalization = Normalization(
                str(self.normalization).strip().lower().replace("-", "_")
            )
            self.kappa = float(self.kappa)
            self.length = float(self.length)
            self.length_tolerance = float(self.length_tolerance)
            self.idealized = self._parse_bool(self.idealized)
            self.gamma_grid = self._parse_grid(self.gamma_grid)
            self.gamma_max = None if self.gamma_max is None else float(self.gamma_max)
            self.gamma_points = int(self.gamma_points)
            self.sample_amplitudes = self._parse_grid(self.sample_amplitudes)
            self.delay_grid = self._parse_grid(self.delay_grid)
            self.delay_max = float(self.delay_max)
            self.delay_points = int(self.delay_points)
            self.tau_c = float(self.tau_c)
            self.v_max = float(self.v_max)
            self.accidentals = float(self.accidentals)
            self.max_workers = int(self.max_workers)
            self.log_level = str(self.log_level).strip().upper()
            self.figure_id = (
                None if self.figure_id in (None, "") else str(self.figure_id).lower()
            )
        except (TypeError, ValueError) as e:
            raise ConfigurationError(f"Invalid configuration value: {e}") from e

    @staticmethod
    def _parse_bool(value: Any) -> bool:
        if isinstance(value, bool):
            return value
        text = str(value).strip().lower()
        if text in ("1", "true", "yes", "on"):
            return True
        if text in ("0", "false", "no", "off", ""):
            return False
        raise ValueError(f"not a boolean: {value!r}")

    @staticmethod
    def _parse_grid(value: Any) -> Optional[List[float]]:
        """Accept a YAML list or a comma separated string"""
        if value is None:
            return None
        if isinstance(value, str):
            items = [v for v in value.replace(" ", "").split(",") if v]
        else:
            items = list(value)
        return [float(v) for v in items]

    def _validate_config(self) -> None:
        """Validate configuration values"""
        if self.kappa <= 0:
            raise ConfigurationError(f"kappa must be positive, got {self.kappa}")
        if self.length <= 0:
            raise ConfigurationError(f"length must be positive, got {self.length}")
        if self.length_tolerance < 0 or self.length_tolerance >= self.length:
            raise ConfigurationError(
                f"length_tolerance must lie in [0, length), got {self.length_tolerance}"
            )
        if self.gamma_max is not None and self.gamma_max < 0:
            raise ConfigurationError(f"gamma_max must be >= 0, got {self.gamma_max}")
        if self.gamma_points < 1 or self.delay_points < 1:
            raise ConfigurationError("Grid point counts must be at least 1")
        if self.delay_max <= 0:
            raise ConfigurationError(f"delay_max must be positive, got {self.delay_max}")
        if self.max_workers < 1:
            raise ConfigurationError(f"max_workers must be >= 1, got {self.max_workers}")
        if self.figure_id is not None and not self.is_valid_figure(self.figure_id):
            raise ConfigurationError(
                f"Invalid figure_id: {self.figure_id}. "
                f"Must be one of: {', '.join(SUPPORTED_FIGURES.keys())}"
            )
        if self.log_level not in logging.getLevelNamesMapping():
            raise ConfigurationError(f"Invalid log_level: {self.log_level}")
        try:
            self.source_model()
        except PtCouplerException as e:
            raise ConfigurationError(f"Invalid source parameters: {e}") from e

    def effective_length(self) -> float:
        """Coupler length after applying the calibrated/idealized switch"""
        if self.idealized:
            return balanced_length(self.kappa)
        return self.length

    def source_model(self) -> SourceModel:
        return SourceModel(
            tau_c=self.tau_c, v_max=self.v_max, accidentals=self.accidentals
        )

    def resolve_gamma_grid(self, figure_id: Optional[str] = None) -> List[float]:
        """Explicit grid, then gamma_max shorthand, then the per-figure default"""
        if self.gamma_grid:
            return list(self.gamma_grid)
        if self.gamma_max is not None:
            return [float(g) for g in np.linspace(0.0, self.gamma_max, self.gamma_points)]
        if figure_id in ("fig2b", "fig4c"):
            ratios = np.linspace(0.0, RATIO_GRID_MAX, RATIO_GRID_POINTS)
            return [float(r * self.kappa) for r in ratios]
        try:
            return gamma_from_amplitude(self.sample_amplitudes)
        except PtCouplerException as e:
            raise ConfigurationError(f"Invalid sample_amplitudes: {e}") from e

    def resolve_delay_grid(self) -> List[float]:
        if self.delay_grid:
            return list(self.delay_grid)
        grid = np.linspace(-self.delay_max, self.delay_max, self.delay_points)
        return [float(t) for t in grid]

    def as_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "kappa": self.kappa,
            "length": self.length,
            "idealized": self.idealized,
            "tau_c": self.tau_c,
            "v_max": self.v_max,
            "accidentals": self.accidentals,
            "normalization": self.normalization.value,
            "max_workers": self.max_workers,
        }

    @staticmethod
    def is_valid_figure(figure_id: str) -> bool:
        """Check if a figure pipeline exists"""
        return figure_id in SUPPORTED_FIGURES


_config: Optional[SimulatorConfig] = None


def load_config(
    config_path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None
) -> SimulatorConfig:
    """Load configuration from environment, an optional file and overrides"""
    global _config
    _config = SimulatorConfig(config_path=config_path, overrides=overrides)
    return _config


def get_config() -> SimulatorConfig:
    """Get the loaded configuration"""
    if _config is None:
        raise RuntimeError("Config not loaded. Call load_config() first.")
    return _config
