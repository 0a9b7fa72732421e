"""
共通フィクスチャ
"""
import numpy as np
import pytest

from collectors.systems import HarmonicOscillator, SimplePendulum
from core.config import settings
from .helpers import REPORTED_HYPERPARAMETERS, recipe_dataset, train_reported_model


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)


@pytest.fixture(scope="session")
def oscillator():
    return HarmonicOscillator()


@pytest.fixture(scope="session")
def pendulum():
    return SimplePendulum()


@pytest.fixture(scope="session")
def oscillator_dataset():
    return recipe_dataset("oscillator")


@pytest.fixture(scope="session")
def pendulum_dataset():
    return recipe_dataset("pendulum")


@pytest.fixture(scope="session")
def oscillator_models(oscillator_dataset):
    """報告値の (σ, λ) で学習した分離ガウス・奇シンプレクティックモデル"""
    return {
        family: train_reported_model(oscillator_dataset, "oscillator", family)
        for family in REPORTED_HYPERPARAMETERS["oscillator"]
    }


@pytest.fixture
def output_root(tmp_path, monkeypatch):
    """出力先を一時ディレクトリに切り替える"""
    monkeypatch.setattr(settings, "output_root", tmp_path)
    return tmp_path
