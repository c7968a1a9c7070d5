"""Shared fixtures. Tests import the package as `src`."""
import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.config import Config, LimitConfig  # noqa: E402
from src.core import GridSpec  # noqa: E402


@pytest.fixture
def default_grid() -> GridSpec:
    return GridSpec(1.0, 1.0e4, 4096)


@pytest.fixture
def short_grid() -> GridSpec:
    return GridSpec(10.0, 100.0, 4096)


@pytest.fixture
def config() -> Config:
    return Config()


@pytest.fixture
def wide_window() -> LimitConfig:
    return LimitConfig(tail_fraction=0.9)


@pytest.fixture
def write_csv(tmp_path):
    """Write columns to a CSV under tmp_path and return its path."""
    import pandas as pd

    def _write(name: str, **columns) -> Path:
        path = tmp_path / name
        pd.DataFrame({k: np.asarray(v) for k, v in columns.items()}).to_csv(
            path, index=False, float_format="%.17g"
        )
        return path

    return _write
