import math

import numpy as np
import pytest
from conftest import cell_sample, dressed

from gateforge.canonical import (
    InteractionContent,
    decompose,
    kron_factor,
    local_invariants,
    normalize,
    reconstruct,
)
from gateforge.errors import DimensionMismatch, NonUnitaryInput
from gateforge.fixtures import ISWAP, SQRT_SWAP, zz
from gateforge.matrix import CNOT, CZ, I4, SWAP, LocalPair, phase_distance, pauli_exponential
from gateforge.sampling import random_local_pair, random_unitary

Q = math.pi / 4


def _in_cell(theta: tuple[float, float, float]) -> bool:
    x, y, z = theta
    return Q >= z >= x >= abs(y) and -Q < y <= Q and (z < Q or y >= 0)


@pytest.mark.parametrize(
    "gate, theta",
    [
        (I4, (0, 0, 0)),
        (CNOT, (0, 0, Q)),
        (CZ, (0, 0, Q)),
        (SWAP, (Q, Q, Q)),
        (ISWAP, (Q, 0, Q)),
        (SQRT_SWAP, (Q / 2, -Q / 2, Q / 2)),
        (zz(0.3), (0, 0, 0.3)),
        (zz(-0.3), (0, 0, 0.3)),
        (zz(0.7), (0, 0, 0.7)),
    ],
)
def test_known_gates(gate: np.ndarray, theta: tuple[float, float, float]) -> None:
    cd = decompose(gate)
    assert np.allclose(cd.core.theta, theta, atol=1e-9)
    assert phase_distance(reconstruct(cd).matrix, gate) <= 1e-9


def test_random_round_trip(rng: np.random.Generator) -> None:
    for _ in range(100):
        u = random_unitary(4, rng)
        cd = decompose(u)
        assert _in_cell(cd.core.theta)
        m = reconstruct(cd).matrix
        # Reconstruction keeps the global phase too.
        assert np.max(np.abs(m - u)) <= 1e-9


@pytest.mark.parametrize("delta", [1e-9, 3e-9, 1e-8, 1e-7, 1e-6])
@pytest.mark.parametrize(
    "center", [(0.4, 0.0, 0.0), (0.3, 0.3, 0.3), (Q, Q, 0.0), (0.0, 0.0, 0.0), (0.2, 0.2, 0.0)]
)
def test_near_degenerate_round_trip(
    center: tuple[float, float, float], delta: float, rng: np.random.Generator
) -> None:
    for _ in range(40):
        u = dressed(np.add(center, delta * rng.standard_normal(3)), rng)
        cd = decompose(u)
        assert _in_cell(cd.core.theta)
        assert np.max(np.abs(reconstruct(cd).matrix - u)) <= 1e-9


def test_dressed_gates_recover_angles(rng: np.random.Generator) -> None:
    for _ in range(50):
        theta = cell_sample(rng)
        cd = decompose(dressed(theta, rng))
        assert np.allclose(cd.core.theta, theta, atol=1e-9)


def test_normalize_keeps_the_gate(rng: np.random.Generator) -> None:
    for _ in range(200):
        raw = rng.uniform(-math.pi, math.pi, 3)
        cd = normalize(raw, LocalPair.identity(), LocalPair.identity())
        assert _in_cell(cd.core.theta)
        target = pauli_exponential(raw).matrix
        assert np.max(np.abs(reconstruct(cd).matrix - target)) <= 1e-12


def test_normalize_boundary_face() -> None:
    cd = normalize((0.2, -0.1, Q), LocalPair.identity(), LocalPair.identity())
    assert cd.core.theta == pytest.approx((0.2, 0.1, Q))
    assert phase_distance(reconstruct(cd).matrix, pauli_exponential((0.2, -0.1, Q)).matrix) <= 1e-12


@pytest.mark.parametrize(
    "theta",
    [(0.1, 0.0, 0.05), (-0.1, 0.0, 0.2), (0.1, 0.2, 0.3), (0.1, -0.1, Q), (0.0, 0.0, 1.0)],
)
def test_interaction_content_rejects_outside_cell(theta: tuple[float, float, float]) -> None:
    with pytest.raises(ValueError):
        InteractionContent(*theta)


def test_decompose_rejects_bad_input() -> None:
    with pytest.raises(DimensionMismatch):
        decompose(np.eye(2))
    m = np.eye(4, dtype=complex)
    m[0, 0] = 1.01
    with pytest.raises(NonUnitaryInput):
        decompose(m)


def test_decompose_snaps_loose_input(rng: np.random.Generator) -> None:
    u = random_unitary(4, rng)
    noisy = u + 1e-8 * rng.standard_normal((4, 4))
    cd = decompose(noisy, tol=1e-6)
    assert phase_distance(reconstruct(cd).matrix, u) <= 1e-7


def test_kron_factor(rng: np.random.Generator) -> None:
    pair = random_local_pair(rng)
    g, a, b = kron_factor(np.exp(0.3j) * pair.matrix)
    assert abs(abs(g) - 1) <= 1e-12
    assert np.allclose(g * np.kron(a, b), np.exp(0.3j) * pair.matrix, atol=1e-12)
    assert np.linalg.det(a) == pytest.approx(1)
    assert np.linalg.det(b) == pytest.approx(1)


@pytest.mark.parametrize(
    "gate, g1, g2",
    [(I4, 1, 3), (CNOT, 0, 1), (CZ, 0, 1), (SWAP, -1, -3)],
)
def test_local_invariants(gate: np.ndarray, g1: complex, g2: float) -> None:
    found_g1, found_g2 = local_invariants(gate)
    assert found_g1 == pytest.approx(g1, abs=1e-12)
    assert found_g2 == pytest.approx(g2, abs=1e-12)


def test_local_invariants_ignore_dressing(rng: np.random.Generator) -> None:
    for _ in range(20):
        u = random_unitary(4, rng)
        v = random_local_pair(rng).matrix @ u @ random_local_pair(rng).matrix
        g1, g2 = local_invariants(u)
        h1, h2 = local_invariants(np.exp(0.9j) * v)
        assert h1 == pytest.approx(g1, abs=1e-10)
        assert h2 == pytest.approx(g2, abs=1e-10)
