"""Named gates and the hand-built two-use CNOT program for ``exp(iπ/6 Z⊗Z)``."""

import math
from typing import Final

import numpy as np

from gateforge.circuit import APPLY_U, GateProgram, Local
from gateforge.matrix import (
    CNOT,
    CZ,
    I4,
    IDENTITY,
    S_DAG,
    SWAP,
    Y_AXIS,
    Z_AXIS,
    AxisAngle,
    LocalPair,
    Matrix,
    OneQubitGate,
    one_qubit_rotation,
    pauli_exponential,
)

ISWAP: Final = np.array(
    [[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
)
SQRT_SWAP: Final = np.array(
    [
        [1, 0, 0, 0],
        [0, (1 + 1j) / 2, (1 - 1j) / 2, 0],
        [0, (1 - 1j) / 2, (1 + 1j) / 2, 0],
        [0, 0, 0, 1],
    ],
    dtype=np.complex128,
)


def zz(theta: float) -> Matrix:
    return pauli_exponential((0.0, 0.0, theta)).matrix


NAMED_GATES: Final[dict[str, Matrix]] = {
    "identity": np.array(I4),
    "cnot": np.array(CNOT),
    "cz": np.array(CZ),
    "swap": np.array(SWAP),
    "iswap": ISWAP,
    "sqrt-swap": SQRT_SWAP,
    "zz-pi6": zz(math.pi / 6),
}


def _rotation(axis: tuple[float, float, float], magnitude: float) -> OneQubitGate:
    return one_qubit_rotation(AxisAngle(axis, magnitude))


def _negated(axis: tuple[float, float, float]) -> tuple[float, float, float]:
    return (-axis[0], -axis[1], -axis[2])


def worked_example_program() -> GateProgram:
    """``A1·U·A2·U·A3 = CNOT`` for ``U = exp(iπ/6 Z⊗Z)``, up to global phase."""
    beta = math.acos(1 / 3) / 2
    gamma = math.acos(1 / math.sqrt(6)) / 2
    # B = √(3/5) Z − √(2/5) Y
    b_axis = (0.0, -math.sqrt(2 / 5), math.sqrt(3 / 5))
    minus_z = _negated(Z_AXIS)

    a1 = LocalPair(
        OneQubitGate(S_DAG),
        _rotation(_negated(b_axis), gamma) @ _rotation(Y_AXIS, beta),
    )
    a2 = LocalPair(
        IDENTITY,
        _rotation(minus_z, math.pi / 6) @ _rotation(_negated(Y_AXIS), beta),
    )
    a3 = LocalPair(
        IDENTITY,
        _rotation(minus_z, math.pi / 6) @ _rotation(b_axis, gamma),
    )
    return GateProgram((Local(a3), APPLY_U, Local(a2), APPLY_U, Local(a1)))
