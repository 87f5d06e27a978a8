import numpy as np
import pytest

from mzi_qfi.fock import FockState


def random_two_mode_state(rng: np.random.Generator, cutoff: int, max_total: int) -> FockState:
    """Random normalized state supported on total photon number <= max_total.

    Keeping support well below the cutoff leaves headroom for raising
    operators and keeps rotations exact.
    """
    grid = np.zeros((cutoff + 1, cutoff + 1), dtype=np.complex128)
    for j in range(min(max_total, cutoff) + 1):
        for k in range(min(max_total - j, cutoff) + 1):
            grid[j, k] = rng.normal() + 1j * rng.normal()
    return FockState(grid / np.linalg.norm(grid), cutoff)


def random_direction(rng: np.random.Generator):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240917)
