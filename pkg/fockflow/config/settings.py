"""
Configuration management for fockflow
"""

import os
import re
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from ..core.exceptions import ConfigurationError

# Load environment variables from .env file if it exists
load_dotenv()

# ${VAR} or ${VAR:-default}
_ENV_PATTERN = re.compile(r"\$\{([A-Za-z_][A-Za-z0-9_]*)(?::-([^}]*))?\}")


class TruncationConfig(BaseModel):
    """Default truncation policy for series, products and lattice sums"""
    max_terms: int = Field(default=128, ge=1)
    tol: float = Field(default=1e-14, gt=0)
    pair_symmetric: bool = True


class QuadratureConfig(BaseModel):
    """Contour quadrature configuration model"""
    samples: int = Field(default=1024, ge=16)


class ZeroSearchConfig(BaseModel):
    """Zero search configuration model"""
    max_depth: int = Field(default=12, ge=1)
    multiplicity_cap: int = Field(default=16, ge=1)
    newton_max_iter: int = Field(default=60, ge=1)


class StreamlineConfig(BaseModel):
    """Streamline tracing configuration model"""
    step: float = Field(default=1e-3, gt=0)
    n_steps: int = Field(default=4000, ge=1)
    seeds_per_singularity: int = Field(default=6, ge=1)


class VerificationConfig(BaseModel):
    """Verification battery configuration model"""
    seed: int = 20240917


class LoggingConfig(BaseModel):
    """Logging configuration model"""
    level: str = "WARNING"
    format: str = "%(message)s"
    file: Optional[str] = None


class AppConfig(BaseModel):
    """Application configuration model"""
    enable_rich_output: bool = True
    json_indent: int = 2


class Config:
    """Main configuration class with environment variable expansion"""

    def __init__(self, config_path: Optional[str] = None):
        """
        Initialize configuration

        Args:
            config_path: Path to configuration file. If None, uses default.
        """
        if config_path is None:
            config_path = Path(__file__).parent / "config.yaml"

        self.config_path = Path(config_path)
        self._raw_data = self._load_config()
        self._expanded_data = self._expand_env_vars(self._raw_data)

        self._validate_config()

    def _load_config(self) -> Dict[str, Any]:
        """Load configuration from YAML file"""
        try:
            with open(self.config_path, 'r', encoding='utf-8') as f:
                return yaml.safe_load(f) or {}
        except FileNotFoundError:
            raise ConfigurationError(f"Configuration file not found: {self.config_path}")
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Invalid YAML in configuration file: {e}")

    def _expand_env_vars(self, data: Any) -> Any:
        """
        Recursively expand environment variables in configuration

        Supports ${VAR_NAME} and ${VAR_NAME:-default} syntax
        """
        if isinstance(data, dict):
            return {key: self._expand_env_vars(value) for key, value in data.items()}
        elif isinstance(data, list):
            return [self._expand_env_vars(item) for item in data]
        elif isinstance(data, str):
            def substitute(match: re.Match) -> str:
                var_name, default = match.group(1), match.group(2)
                env_value = os.getenv(var_name)
                if env_value is not None and env_value != "":
                    return env_value
                if default is not None:
                    return default
                raise ConfigurationError(f"Environment variable '{var_name}' is not set")

            return _ENV_PATTERN.sub(substitute, data)
        else:
            return data

    def _validate_config(self):
        """Validate configuration and create typed objects"""
        try:
            self.truncation = TruncationConfig(**self._expanded_data.get('truncation', {}))
            self.quadrature = QuadratureConfig(**self._expanded_data.get('quadrature', {}))
            self.zero_search = ZeroSearchConfig(**self._expanded_data.get('zero_search', {}))
            self.streamlines = StreamlineConfig(**self._expanded_data.get('streamlines', {}))
            self.verification = VerificationConfig(**self._expanded_data.get('verification', {}))
            self.logging = LoggingConfig(**self._expanded_data.get('logging', {}))
            self.app = AppConfig(**self._expanded_data.get('app', {}))
        except ValidationError as e:
            raise ConfigurationError(f"Configuration validation failed: {e}")

    @property
    def truncation_config(self) -> TruncationConfig:
        """Get truncation configuration"""
        return self.truncation

    @property
    def quadrature_config(self) -> QuadratureConfig:
        """Get quadrature configuration"""
        return self.quadrature

    @property
    def zero_search_config(self) -> ZeroSearchConfig:
        """Get zero search configuration"""
        return self.zero_search

    @property
    def streamline_config(self) -> StreamlineConfig:
        """Get streamline configuration"""
        return self.streamlines

    @property
    def verification_config(self) -> VerificationConfig:
        """Get verification configuration"""
        return self.verification

    @property
    def logging_config(self) -> LoggingConfig:
        """Get logging configuration"""
        return self.logging

    @property
    def app_config(self) -> AppConfig:
        """Get application configuration"""
        return self.app

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary"""
        return self._expanded_data

    def __repr__(self) -> str:
        return f"Config(path={self.config_path}, max_terms={self.truncation.max_terms})"


def load_config(config_path: Optional[str] = None) -> Config:
    """
    Convenience function to load configuration

    Args:
        config_path: Path to configuration file

    Returns:
        Loaded and validated configuration
    """
    return Config(config_path)
