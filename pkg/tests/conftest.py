import numpy as np
import pytest

from csipose.data import SynthConfig, generate_windows
from csipose.model import tiny_config


@pytest.fixture(scope="session")
def tiny_cfg():
    return tiny_config()


@pytest.fixture(scope="session")
def tiny_synth_cfg():
    # Geometry matches tiny_config(): 3x12x5 inputs, 4 joints, 2-D.
    return SynthConfig(
        num_clips=8,
        clip_len=9,
        window=3,
        stride=2,
        joints=4,
        coord_dim=2,
        noise_sigma=0.0,
        seed=7,
        channels=3,
        rows=12,
        steps=5,
    )


@pytest.fixture(scope="session")
def tiny_windows(tiny_synth_cfg):
    windows = generate_windows(tiny_synth_cfg)
    assert len(windows) == 32
    return windows


def make_raw_amplitudes(num_samples: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return 10.0 + rng.random((num_samples, 3, 3, 30))
