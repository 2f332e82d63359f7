"""
Configuration management for CdmaBus.

This module handles loading and accessing configuration from YAML files
and environment variables.
"""

import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

DEFAULT_CONFIG_DIR = Path(__file__).resolve().parent.parent / "config"


class Config:
    """Configuration manager for CdmaBus."""

    def __init__(self, config_dir: Optional[str] = None):
        """
        Initialize configuration manager.

        Args:
            config_dir: Directory containing configuration files
                (CDMABUS_CONFIG_DIR or the repository's config/ if None)
        """
        if config_dir is None:
            config_dir = os.getenv('CDMABUS_CONFIG_DIR', str(DEFAULT_CONFIG_DIR))
        self.config_dir = Path(config_dir)
        self._config = None

    def load_config(self) -> Dict[str, Any]:
        """
        Load main configuration file.

        Returns:
            Dictionary containing configuration ({} when the file is absent)
        """
        if self._config is None:
            config_path = self.config_dir / "config.yaml"
            if config_path.exists():
                with open(config_path, 'r') as f:
                    self._config = yaml.safe_load(f) or {}
            else:
                self._config = {}
        return self._config

    def _section(self, name: str) -> Dict[str, Any]:
        return self.load_config().get(name, {}) or {}

    def get_codebook_params(self) -> Dict[str, Any]:
        """
        Get code book generation defaults.

        Returns:
            Dictionary with kind, length, lfsr and validation settings
        """
        return self._section('codebook')

    def get_codec_params(self) -> Dict[str, Any]:
        """
        Get encoder/decoder defaults.

        Returns:
            Dictionary with word_width and strict
        """
        return self._section('codec')

    def get_channel_params(self) -> Dict[str, Any]:
        """
        Get shared medium defaults.

        Returns:
            Dictionary with error_rate, rng_seed and skip_zero_code
        """
        return self._section('channel')

    def get_bus_params(self) -> Dict[str, Any]:
        """
        Get bus wrapper defaults.

        Returns:
            Dictionary with extra_latency and interface names
        """
        return self._section('bus')

    def get_simulator_params(self) -> Dict[str, Any]:
        """
        Get scenario defaults applied to optional scenario fields.

        Returns:
            Dictionary of simulator parameters
        """
        return self._section('simulator')

    def get_logging_params(self) -> Dict[str, Any]:
        """
        Get logging settings.

        Returns:
            Dictionary with level
        """
        return self._section('logging')


# Global config instance
config = Config()


# Convenience functions
def get_config() -> Config:
    """
    Get the global configuration instance.

    Returns:
        Config instance
    """
    return config


def get_codebook_params() -> Dict[str, Any]:
    """Get code book parameters."""
    return config.get_codebook_params()


def get_codec_params() -> Dict[str, Any]:
    """Get codec parameters."""
    return config.get_codec_params()


def get_channel_params() -> Dict[str, Any]:
    """Get channel parameters."""
    return config.get_channel_params()


def get_bus_params() -> Dict[str, Any]:
    """Get bus interface parameters."""
    return config.get_bus_params()


def get_simulator_params() -> Dict[str, Any]:
    """Get simulator parameters."""
    return config.get_simulator_params()


def get_logging_params() -> Dict[str, Any]:
    """Get logging parameters."""
    return config.get_logging_params()
