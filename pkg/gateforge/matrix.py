"""Small dense complex matrix algebra for one- and two-qubit unitaries.

Qubit 1 is the most significant tensor factor throughout, so ``tensor(a, b)``
acts with ``a`` on qubit 1 and ``b`` on qubit 2. Rotations use the ``+i``
exponent: ``one_qubit_rotation`` of axis n and magnitude m is
``cos(m)·I + i·sin(m)·(n·σ)``.
"""

import cmath
import math
from collections.abc import Sequence
from dataclasses import InitVar, dataclass
from typing import Final

import numpy as np
from numpy.typing import ArrayLike, NDArray

from gateforge.errors import DimensionMismatch, NonUnitaryInput

Matrix = NDArray[np.complex128]
Vector3 = tuple[float, float, float]

TOL_UNITARY: Final = 1e-9
TOL_IDENTITY: Final = 1e-12

# Below this the rotation axis is numerically undefined.
_AXIS_EPS: Final = 1e-14


def _frozen(entries: ArrayLike) -> Matrix:
    m = np.array(entries, dtype=np.complex128)
    m.setflags(write=False)
    return m


I2: Final = _frozen(np.eye(2))
X: Final = _frozen([[0, 1], [1, 0]])
Y: Final = _frozen([[0, -1j], [1j, 0]])
Z: Final = _frozen([[1, 0], [0, -1]])
H: Final = _frozen(np.array([[1, 1], [1, -1]]) / math.sqrt(2))
S_DAG: Final = _frozen([[1, 0], [0, -1j]])
PAULIS: Final = (X, Y, Z)

I4: Final = _frozen(np.eye(4))
CNOT: Final = _frozen([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
CZ: Final = _frozen(np.diag([1, 1, 1, -1]))
SWAP: Final = _frozen([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])

X_AXIS: Final[Vector3] = (1.0, 0.0, 0.0)
Y_AXIS: Final[Vector3] = (0.0, 1.0, 0.0)
Z_AXIS: Final[Vector3] = (0.0, 0.0, 1.0)
AXES: Final = (X_AXIS, Y_AXIS, Z_AXIS)

# Bell basis (columns Φ+, Φ−, Ψ+, Ψ−): the common eigenbasis of XX, YY, ZZ.
_BELL: Final = np.array(
    [
        [1, 1, 0, 0],
        [0, 0, 1, 1],
        [0, 0, 1, -1],
        [1, -1, 0, 0],
    ],
    dtype=np.float64,
) / math.sqrt(2)
# Row k holds the XX, YY, ZZ eigenvalues on Bell column k.
_BELL_SIGNS: Final = np.array(
    [
        [1, -1, 1],
        [-1, 1, 1],
        [1, 1, -1],
        [-1, -1, -1],
    ],
    dtype=np.float64,
)


def dagger(m: Matrix) -> Matrix:
    return m.conj().T


def unitarity_defect(m: Matrix) -> tuple[float, tuple[int, int]]:
    """Largest entry of |U†U − I| and where it sits."""
    defect = np.abs(dagger(m) @ m - np.eye(m.shape[0]))
    i, j = np.unravel_index(int(np.argmax(defect)), defect.shape)
    return float(defect[i, j]), (int(i), int(j))


def check_unitary(m: Matrix, tol: float = TOL_UNITARY, *, what: str = "matrix") -> None:
    if not np.all(np.isfinite(m)):
        raise NonUnitaryInput(f"{what} has non-finite entries")
    worst, (i, j) = unitarity_defect(m)
    if worst > tol:
        raise NonUnitaryInput(
            f"{what} is not unitary: |U†U−I| = {worst:.3g} at entry ({i}, {j}) "
            f"exceeds tolerance {tol:.3g}"
        )


def _checked(entries: ArrayLike, size: int, tol: float, what: str) -> Matrix:
    m = np.array(entries, dtype=np.complex128)
    if m.shape != (size, size):
        raise DimensionMismatch(f"{what} must be {size}x{size}, got shape {m.shape}")
    check_unitary(m, tol, what=what)
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class OneQubitGate:
    matrix: Matrix
    tol: InitVar[float] = TOL_UNITARY

    def __post_init__(self, tol: float) -> None:
        object.__setattr__(self, "matrix", _checked(self.matrix, 2, tol, "one-qubit gate"))

    def dagger(self) -> "OneQubitGate":
        return OneQubitGate(dagger(self.matrix))

    def __matmul__(self, other: "OneQubitGate") -> "OneQubitGate":
        return OneQubitGate(self.matrix @ other.matrix)


@dataclass(frozen=True, eq=False)
class TwoQubitGate:
    matrix: Matrix
    tol: InitVar[float] = TOL_UNITARY

    def __post_init__(self, tol: float) -> None:
        object.__setattr__(self, "matrix", _checked(self.matrix, 4, tol, "two-qubit gate"))


IDENTITY: Final = OneQubitGate(I2)


@dataclass(frozen=True, eq=False)
class LocalPair:
    """``first ⊗ second``: ``first`` acts on qubit 1, ``second`` on qubit 2."""

    first: OneQubitGate
    second: OneQubitGate

    @classmethod
    def identity(cls) -> "LocalPair":
        return cls(IDENTITY, IDENTITY)

    @property
    def matrix(self) -> Matrix:
        return np.kron(self.first.matrix, self.second.matrix)

    def dagger(self) -> "LocalPair":
        return LocalPair(self.first.dagger(), self.second.dagger())

    def then(self, later: "LocalPair") -> "LocalPair":
        """Factor-wise product with ``later`` applied after ``self``."""
        return LocalPair(later.first @ self.first, later.second @ self.second)

    def is_identity(self, tol: float = TOL_IDENTITY) -> bool:
        return phase_distance(self.matrix, I4) <= tol


@dataclass(frozen=True)
class AxisAngle:
    axis: Vector3
    magnitude: float

    def __post_init__(self) -> None:
        norm = math.sqrt(sum(c * c for c in self.axis))
        if abs(norm - 1) > 1e-12:
            raise ValueError(f"rotation axis must be a unit vector, got norm {norm!r}")
        if not 0 <= self.magnitude <= math.pi:
            raise ValueError(f"rotation magnitude {self.magnitude!r} outside [0, π]")

    @classmethod
    def from_vector(cls, vector: ArrayLike) -> "AxisAngle":
        v = np.asarray(vector, dtype=np.float64)
        magnitude = float(np.linalg.norm(v))
        if magnitude <= _AXIS_EPS:
            return cls(Z_AXIS, 0.0)
        return cls(_as_vector3(v / magnitude), magnitude)

    @property
    def vector(self) -> NDArray[np.float64]:
        return self.magnitude * np.asarray(self.axis)


def _as_vector3(v: ArrayLike) -> Vector3:
    a = np.asarray(v, dtype=np.float64)
    return (float(a[0]), float(a[1]), float(a[2]))


def unit_vector(v: ArrayLike, *, what: str = "axis") -> NDArray[np.float64]:
    a = np.asarray(v, dtype=np.float64)
    norm = float(np.linalg.norm(a))
    if a.shape != (3,) or abs(norm - 1) > 1e-9:
        raise ValueError(f"{what} must be a unit 3-vector, got {a!r}")
    return a / norm


def pauli_vector(v: ArrayLike) -> Matrix:
    """``v·(X, Y, Z)``."""
    a = np.asarray(v, dtype=np.float64)
    return a[0] * X + a[1] * Y + a[2] * Z


def tensor(a: OneQubitGate, b: OneQubitGate) -> TwoQubitGate:
    return TwoQubitGate(np.kron(a.matrix, b.matrix))


def phase_distance(u: ArrayLike, v: ArrayLike) -> float:
    """Global-phase-blind distance between two unitaries of the same size.

    Equal to ``sqrt(max(0, 1 − |tr(u†v)|/n))``, evaluated as
    ``‖v − e^{iα}u‖_F / sqrt(2n)`` with ``α = arg tr(u†v)`` so that values
    near zero keep full precision.
    """
    a = np.asarray(u, dtype=np.complex128)
    b = np.asarray(v, dtype=np.complex128)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"cannot compare shapes {a.shape} and {b.shape}")
    n = a.shape[0]
    overlap = complex(np.trace(dagger(a) @ b))
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(b - phase * a)) / math.sqrt(2 * n)


def one_qubit_rotation(r: AxisAngle) -> OneQubitGate:
    c, s = math.cos(r.magnitude), math.sin(r.magnitude)
    return OneQubitGate(c * I2 + 1j * s * pauli_vector(r.axis))


def axis_angle_of(g: OneQubitGate) -> tuple[AxisAngle, float]:
    """Inverse of ``one_qubit_rotation`` up to a returned global phase.

    The phase is ``arg(det g)/2`` in (−π/2, π/2]; the remaining SU(2) factor
    fixes the magnitude in [0, π]. Axis defaults to ẑ when undefined.
    """
    m = g.matrix
    phase = cmath.phase(complex(np.linalg.det(m))) / 2
    r = m * cmath.exp(-1j * phase)
    c = float(np.clip(np.real(np.trace(r)) / 2, -1.0, 1.0))
    v = np.array([np.imag(np.trace(r @ p)) / 2 for p in PAULIS])
    s = float(np.linalg.norm(v))
    magnitude = math.atan2(s, c)
    if s <= _AXIS_EPS:
        return AxisAngle(Z_AXIS, magnitude), phase
    return AxisAngle(_as_vector3(v / s), magnitude), phase


def pauli_exponential(theta: Sequence[float]) -> TwoQubitGate:
    """``exp(i(θx X⊗X + θy Y⊗Y + θz Z⊗Z))`` in closed form."""
    eigenphases = _BELL_SIGNS @ np.asarray(theta, dtype=np.float64)
    return TwoQubitGate((_BELL * np.exp(1j * eigenphases)) @ _BELL.T)


def _perpendicular(f: NDArray[np.float64]) -> NDArray[np.float64]:
    reference = min((np.asarray(Z_AXIS), np.asarray(X_AXIS)), key=lambda c: abs(float(f @ c)))
    p = np.cross(f, reference)
    return p / np.linalg.norm(p)


def aligning_gate(source: ArrayLike, target: ArrayLike) -> OneQubitGate:
    """A with ``A (source·σ) A† = target·σ``.

    Uses the shortest Bloch-sphere rotation carrying ``source`` onto
    ``target``; antipodal pairs turn by π about a fixed perpendicular. So
    ``aligning_gate(ẑ, x̂)`` is a quarter turn about ŷ, not H, though both
    conjugate Z into X.
    """
    f = unit_vector(source, what="source axis")
    t = unit_vector(target, what="target axis")
    k = np.cross(f, t)
    s, c = float(np.linalg.norm(k)), float(f @ t)
    if s <= _AXIS_EPS:
        if c > 0:
            return IDENTITY
        k = _perpendicular(f)
    else:
        k = k / s
    # e^{-iω/2 k·σ} turns the Bloch sphere by +ω about k.
    return one_qubit_rotation(AxisAngle(_as_vector3(-k), math.atan2(s, c) / 2))


def controlled(target: ArrayLike) -> Matrix:
    """``|0⟩⟨0|⊗I + |1⟩⟨1|⊗target`` with qubit 1 as control."""
    m = np.zeros((4, 4), dtype=np.complex128)
    m[:2, :2] = I2
    m[2:, 2:] = np.asarray(target, dtype=np.complex128)
    return m
