import math
from collections.abc import Callable
from pathlib import Path

import numpy as np
import pytest
from numpy.typing import ArrayLike

from gateforge.canonical import CanonicalDecomposition, InteractionContent
from gateforge.circuit import serialize_gate
from gateforge.matrix import LocalPair, Matrix, pauli_exponential
from gateforge.sampling import random_local_pair


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0)


def dressed(theta: ArrayLike, rng: np.random.Generator) -> Matrix:
    """``(A⊗B)·exp(i(θx XX + θy YY + θz ZZ))·(C⊗D)`` with random locals."""
    after = random_local_pair(rng)
    before = random_local_pair(rng)
    return after.matrix @ pauli_exponential(np.asarray(theta, dtype=float)).matrix @ before.matrix


def bare(theta_x: float, theta_y: float, theta_z: float) -> CanonicalDecomposition:
    return CanonicalDecomposition(
        after=LocalPair.identity(),
        core=InteractionContent(theta_x, theta_y, theta_z),
        before=LocalPair.identity(),
        global_phase=0.0,
    )


def cell_sample(rng: np.random.Generator, floor: float = 0.02) -> tuple[float, float, float]:
    """(θx, θy, θz) strictly inside the canonical cell, with θz ≥ floor."""
    z = rng.uniform(floor, math.pi / 4)
    x = rng.uniform(0, z)
    y = rng.uniform(-x, x)
    return (x, y, z)


@pytest.fixture
def write_gate(tmp_path: Path) -> Callable[[str, ArrayLike], Path]:
    def _write(name: str, m: ArrayLike) -> Path:
        path = tmp_path / f"{name}.json"
        path.write_text(serialize_gate(m), encoding="utf-8")
        return path

    return _write
