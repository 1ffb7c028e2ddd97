"""Primitive versus imprimitive gates.

For two qubits a gate is entangling exactly when it is imprimitive, that is
neither a product of one-qubit gates nor such a product followed by SWAP.
``classify`` reads this off the canonical angles; ``entangling_oracle`` is an
independent witness search used to cross-check it.
"""

import itertools
import logging
import math
from typing import Final

import numpy as np
from numpy.typing import ArrayLike

from gateforge.canonical import CanonicalDecomposition
from gateforge.errors import NotNormalized
from gateforge.matrix import TwoQubitGate
from gateforge.sampling import random_product_state
from gateforge.types import GateClass

logger = logging.getLogger(__name__)

TOL_CLASS: Final = 1e-8
TOL_NORM: Final = 1e-9

_QUARTER: Final = math.pi / 4
_R2: Final = 1 / math.sqrt(2)

# |0⟩, |1⟩, |+⟩, |−⟩, |+i⟩, |−i⟩
SINGLE_QUBIT_STATES: Final = (
    np.array([1, 0], dtype=np.complex128),
    np.array([0, 1], dtype=np.complex128),
    np.array([_R2, _R2], dtype=np.complex128),
    np.array([_R2, -_R2], dtype=np.complex128),
    np.array([_R2, 1j * _R2], dtype=np.complex128),
    np.array([_R2, -1j * _R2], dtype=np.complex128),
)


def classify(cd: CanonicalDecomposition, tol: float = TOL_CLASS) -> GateClass:
    x, y, z = cd.core.theta
    if max(abs(x), abs(y), abs(z)) <= tol:
        return GateClass.PRIMITIVE_LOCAL
    if abs(z - _QUARTER) <= tol and abs(x - _QUARTER) <= tol and abs(abs(y) - _QUARTER) <= tol:
        return GateClass.PRIMITIVE_SWAP
    return GateClass.IMPRIMITIVE


def concurrence(state: ArrayLike) -> float:
    """Pure-state concurrence ``2|ad − bc|`` of a normalized two-qubit state."""
    a, b, c, d = np.asarray(state, dtype=np.complex128).reshape(4)
    norm = math.sqrt(abs(a) ** 2 + abs(b) ** 2 + abs(c) ** 2 + abs(d) ** 2)
    if abs(norm - 1) > TOL_NORM:
        raise NotNormalized(f"state has norm {norm!r}, expected 1")
    return min(1.0, 2 * abs(a * d - b * c))


def entangling_oracle(
    u: TwoQubitGate | ArrayLike,
    trials: int = 100,
    tol: float = 1e-6,
    *,
    seed: int = 0,
) -> bool:
    """True when some product input comes out entangled.

    A witness search, not a proof: ``False`` only means no tested input was
    entangled.
    """
    m = u.matrix if isinstance(u, TwoQubitGate) else np.asarray(u, dtype=np.complex128)
    for a, b in itertools.product(SINGLE_QUBIT_STATES, repeat=2):
        if concurrence(m @ np.kron(a, b)) > tol:
            return True
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        if concurrence(m @ random_product_state(rng)) > tol:
            return True
    logger.debug("No entangling witness in %d product states", 36 + trials)
    return False
