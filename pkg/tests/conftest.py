from pathlib import Path

import numpy as np
import pytest

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def published_metrics_text() -> str:
    return (DATA_DIR / "published_metrics.csv").read_text()


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20240501)


def random_raster(rng: np.random.Generator, h: int, w: int) -> np.ndarray:
    return rng.integers(0, 256, (h, w, 3), dtype=np.uint8)
