"""Pytest configuration and fixtures"""
import os

import numpy as np
import pytest

import config
from config import SimulatorConfig
from dependencies import cleanup_services
from services.experiments import ExperimentService

KAPPA = 0.26
CALIBRATED_LENGTH = 2.1


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    """Drop PTC_* variables and ignore any local .env file"""
    monkeypatch.setattr("config.load_dotenv", lambda: None)
    for key in list(os.environ):
        if key.startswith(config.ENV_PREFIX):
            monkeypatch.delenv(key, raising=False)
    monkeypatch.setattr("config._config", None)
    cleanup_services()
    yield
    cleanup_services()


@pytest.fixture
def sim_config():
    """Default (calibrated mode) configuration"""
    return SimulatorConfig()


@pytest.fixture
def service(sim_config):
    return ExperimentService(sim_config)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

