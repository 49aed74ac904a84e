import math

import numpy as np
import pytest

from pcombine.models.methods import (
    CauchyCombination,
    GeneralizedMean,
    Simes,
    bonferroni,
)
from pcombine.models.pvalues import PValueVector
from pcombine.settings import get_settings


@pytest.fixture(autouse=True)
def fresh_settings():
    """Reload settings for every test so environment patches take effect."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng():
    """Seeded generator for test inputs."""
    return np.random.default_rng(20210131)


@pytest.fixture
def homogeneous_methods():
    """Methods whose VAD threshold is a multiple of epsilon."""
    return [
        bonferroni(),
        GeneralizedMean(r=-4.0),
        GeneralizedMean(r=-1.0),
        GeneralizedMean(r=0.0),
        GeneralizedMean(r=1.0),
        GeneralizedMean(r=math.inf),
        Simes(),
    ]


@pytest.fixture
def all_methods(homogeneous_methods):
    """Every method with a VAD threshold, Cauchy included."""
    return homogeneous_methods + [CauchyCombination()]


@pytest.fixture
def sample_pvalues():
    """Small vector used across the combiner and sequential tests."""
    return PValueVector.of([0.01, 0.04, 0.09, 0.5])


@pytest.fixture
def pvalue_file(tmp_path):
    """Factory writing text to a file under tmp_path and returning its path."""

    def write(text: str, name: str = "pvalues.txt"):
        path = tmp_path / name
        path.write_text(text)
        return path

    return write
