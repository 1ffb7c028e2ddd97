"""End-to-end checks over seeded corpora."""

import math

import numpy as np
import pytest
from conftest import cell_sample, dressed

from gateforge.canonical import decompose, reconstruct
from gateforge.circuit import evaluate
from gateforge.classify import classify, entangling_oracle
from gateforge.crot import compile_cnot, compose_rotations, solve_tilt
from gateforge.fixtures import ISWAP, SQRT_SWAP, worked_example_program, zz
from gateforge.matrix import CNOT, CZ, I4, SWAP, AxisAngle, axis_angle_of, one_qubit_rotation, phase_distance
from gateforge.sampling import random_local_pair, random_unitary
from gateforge.types import GateClass, ZZCase

Q = math.pi / 4


def test_worked_example() -> None:
    u = zz(math.pi / 6)
    assert phase_distance(evaluate(worked_example_program(), u), CNOT) <= 1e-10
    program, report = compile_cnot(u)
    assert program.uses_of_u == report.uses_of_u == 2
    assert report.verification_residual is not None
    assert report.verification_residual <= 1e-9


def test_solver_anchor() -> None:
    assert solve_tilt(math.pi / 3, math.pi / 3, math.pi / 2)[2] == pytest.approx(1 / 3, abs=1e-12)


def test_canonical_round_trip() -> None:
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(1000):
        u = random_unitary(4, rng)
        cd = decompose(u)
        x, y, z = cd.core.theta
        assert Q >= z >= x >= abs(y)
        assert -Q < y <= Q
        assert z < Q or y >= 0
        worst = max(worst, phase_distance(reconstruct(cd).matrix, u))
    assert worst <= 1e-9


def _bound_is_guaranteed(theta: tuple[float, float, float]) -> bool:
    # The doubled phase is at least π/8 once some angle sits in [π/16, 3π/16].
    x, y, z = theta
    return z <= 3 * math.pi / 16 or any(
        math.pi / 16 <= abs(t) <= 3 * math.pi / 16 for t in (x, y, z)
    )


def test_compiler_exactness() -> None:
    rng = np.random.default_rng(7)
    checked = 0
    for _ in range(500):
        theta = cell_sample(rng)
        u = dressed(theta, rng)
        program, report = compile_cnot(u)
        assert report.verification_residual is not None
        assert report.verification_residual <= 1e-8
        assert phase_distance(evaluate(program, u), CNOT) <= 1e-8
        if report.case in (ZZCase.DIRECT_ZZ, ZZCase.GENERAL_DOUBLING) and _bound_is_guaranteed(
            report.theta
        ):
            checked += 1
            assert report.uses_of_u <= 2 * report.bound_q + 4
            assert report.ratio <= 1 + 16 * report.theta_max / math.pi + 1e-9
    assert checked > 300


def test_classification_corpus() -> None:
    rng = np.random.default_rng(11)
    primitive = [I4, SWAP]
    for _ in range(10):
        primitive.append(random_local_pair(rng).matrix)
        primitive.append(random_local_pair(rng).matrix @ SWAP @ random_local_pair(rng).matrix)
    imprimitive = [CNOT, CZ, ISWAP, SQRT_SWAP] + [zz(t) for t in (0.1, 0.3, 0.7)]
    for gate in primitive + imprimitive:
        entangling = classify(decompose(gate)) is GateClass.IMPRIMITIVE
        assert entangling == entangling_oracle(gate, trials=50, tol=1e-6)
    assert all(classify(decompose(g)) is GateClass.IMPRIMITIVE for g in imprimitive)


def test_composition_formula() -> None:
    rng = np.random.default_rng(3)
    for _ in range(10_000):
        rotations = []
        for _ in range(2):
            axis = rng.standard_normal(3)
            axis /= np.linalg.norm(axis)
            rotations.append(
                AxisAngle((float(axis[0]), float(axis[1]), float(axis[2])), rng.uniform(0.01, 3.1))
            )
        a, b = rotations
        expected, _ = axis_angle_of(one_qubit_rotation(a) @ one_qubit_rotation(b))
        found = compose_rotations(a, b)
        assert abs(found.magnitude - expected.magnitude) <= 1e-10
        assert np.max(np.abs(np.subtract(found.axis, expected.axis))) <= 1e-10


def test_special_cases() -> None:
    _, report = compile_cnot(CNOT)
    assert report.uses_of_u == 1

    rng = np.random.default_rng(5)
    u = dressed((Q, 0.0, Q), rng)
    program, report = compile_cnot(u)
    assert report.case is ZZCase.DOUBLE_PI4
    assert report.uses_of_u == 8
    assert phase_distance(evaluate(program, u), CNOT) <= 1e-8
