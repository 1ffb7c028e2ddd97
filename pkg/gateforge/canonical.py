"""Canonical (KAK) decomposition of two-qubit unitaries.

Any two-qubit gate factors as

    U = e^{iα} (A1 ⊗ B1) · exp(i(θx XX + θy YY + θz ZZ)) · (A2 ⊗ B2)

with unit-determinant one-qubit factors. ``decompose`` computes the factors
in the magic basis and ``normalize`` moves the angles into the cell

    π/4 ≥ θz ≥ θx ≥ |θy|,  θy ∈ (−π/4, π/4],  θy ≥ 0 when θz = π/4.
"""

import cmath
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Final

import numpy as np
from numpy.typing import ArrayLike, NDArray

from gateforge.circuit import encode_matrix
from gateforge.errors import DimensionMismatch
from gateforge.matrix import (
    PAULIS,
    TOL_UNITARY,
    LocalPair,
    Matrix,
    OneQubitGate,
    TwoQubitGate,
    Vector3,
    check_unitary,
    dagger,
    pauli_exponential,
)
from gateforge.types import CanonicalDoc

logger = logging.getLogger(__name__)

_QUARTER: Final = math.pi / 4
_HALF: Final = math.pi / 2

# Columns: Φ+, iΨ+, Ψ−, iΦ−. Conjugation by MAGIC maps SU(2)⊗SU(2) onto SO(4)
# and diagonalizes every exp(i(θx XX + θy YY + θz ZZ)).
MAGIC: Final = np.array(
    [
        [1, 0, 0, 1j],
        [0, 1j, 1, 0],
        [0, 1j, -1, 0],
        [1, 0, 0, -1j],
    ],
    dtype=np.complex128,
) / math.sqrt(2)
MAGIC_DAG: Final = dagger(MAGIC)

# Magic-basis eigenphases → (global phase, θx, θy, θz).
_GAMMA: Final = (
    np.array(
        [
            [1, 1, 1, 1],
            [1, 1, -1, -1],
            [-1, 1, -1, 1],
            [1, -1, -1, 1],
        ],
        dtype=np.float64,
    )
    / 4
)

EIGEN_CLUSTER_TOL: Final = 1e-8
JACOBI_TOL: Final = 1e-14
_JACOBI_SWEEPS: Final = 20
BOUNDARY_TOL: Final = 1e-12

# Unit-determinant Pauli flips: iX, iY, iZ.
_FLIPPERS: Final = tuple(1j * p for p in PAULIS)


@dataclass(frozen=True)
class InteractionContent:
    theta_x: float
    theta_y: float
    theta_z: float

    def __post_init__(self) -> None:
        x, y, z = self.theta_x, self.theta_y, self.theta_z
        if not (
            _QUARTER >= z >= x >= abs(y)
            and x >= 0
            and -_QUARTER < y <= _QUARTER
            and (z < _QUARTER or y >= 0)
        ):
            raise ValueError(f"angles ({x!r}, {y!r}, {z!r}) are outside the canonical cell")

    @property
    def theta(self) -> Vector3:
        return (self.theta_x, self.theta_y, self.theta_z)

    @property
    def theta_max(self) -> float:
        return self.theta_z


@dataclass(frozen=True)
class CanonicalDecomposition:
    after: LocalPair
    core: InteractionContent
    before: LocalPair
    global_phase: float

    def to_doc(self) -> CanonicalDoc:
        return {
            "theta": list(self.core.theta),
            "global_phase": self.global_phase,
            "after": {
                "a": encode_matrix(self.after.first.matrix),
                "b": encode_matrix(self.after.second.matrix),
            },
            "before": {
                "a": encode_matrix(self.before.first.matrix),
                "b": encode_matrix(self.before.second.matrix),
            },
        }


def reconstruct(cd: CanonicalDecomposition) -> TwoQubitGate:
    core = pauli_exponential(cd.core.theta).matrix
    m = cmath.exp(1j * cd.global_phase) * (cd.after.matrix @ core @ cd.before.matrix)
    return TwoQubitGate(m)


def _wrap(angle: float) -> float:
    """Into (−π, π]."""
    wrapped = math.remainder(angle, 2 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


def _half_turn(k1: int, k2: int) -> Matrix:
    """Unit-determinant gate exchanging the k1 and k2 Pauli axes."""
    return 1j * (PAULIS[k1] + PAULIS[k2]) / math.sqrt(2)


def normalize(
    raw_theta: Sequence[float],
    after: LocalPair,
    before: LocalPair,
    global_phase: float = 0.0,
    *,
    boundary_tol: float = BOUNDARY_TOL,
) -> CanonicalDecomposition:
    """Moves raw interaction angles into the canonical cell.

    Every move is a local identity folded into ``after``/``before`` or the
    global phase, so the reconstructed gate is unchanged.
    """
    v = [float(t) for t in raw_theta]
    phase = [global_phase]
    left = [after.first.matrix, after.second.matrix]
    right = [before.first.matrix, before.second.matrix]

    # exp(i(θ ± π/2)σσ) = exp(iθσσ) · (±i σσ)
    def shift(k: int, step: int) -> None:
        v[k] += step * _HALF
        phase[0] += step * _HALF
        right[0] = _FLIPPERS[k] @ right[0]
        right[1] = _FLIPPERS[k] @ right[1]

    # One-sided Pauli conjugation negates the two other axes.
    def negate(k1: int, k2: int) -> None:
        v[k1] *= -1
        v[k2] *= -1
        f = _FLIPPERS[3 - k1 - k2]
        left[1] = left[1] @ f
        right[1] = dagger(f) @ right[1]

    def swap(k1: int, k2: int) -> None:
        v[k1], v[k2] = v[k2], v[k1]
        w = _half_turn(k1, k2)
        left[0] = left[0] @ dagger(w)
        left[1] = left[1] @ dagger(w)
        right[0] = w @ right[0]
        right[1] = w @ right[1]
        logger.debug("Relabeled axes %d and %d", k1, k2)

    def canonical_shift(k: int) -> None:
        while v[k] <= -_QUARTER:
            shift(k, +1)
        while v[k] > _QUARTER:
            shift(k, -1)

    x, y, z = 0, 1, 2
    for k in (x, y, z):
        canonical_shift(k)

    # |θz| ≥ |θx| ≥ |θy|; strict comparisons keep ties in z, x, y order.
    if abs(v[z]) < abs(v[x]):
        swap(z, x)
    if abs(v[x]) < abs(v[y]):
        swap(x, y)
    if abs(v[z]) < abs(v[x]):
        swap(z, x)

    if v[z] < 0:
        negate(z, y)
    if v[x] < 0:
        negate(x, y)
    canonical_shift(y)

    # On the θz = π/4 face, θy and −θy are the same class.
    if v[z] > _QUARTER - boundary_tol and v[y] < 0:
        shift(z, -1)
        negate(z, y)
        v[z] = min(v[z], _QUARTER)

    core = InteractionContent(theta_x=v[x], theta_y=v[y], theta_z=v[z])
    logger.debug("Normalized %s to %s", tuple(raw_theta), core.theta)
    return CanonicalDecomposition(
        after=LocalPair(OneQubitGate(left[0]), OneQubitGate(left[1])),
        core=core,
        before=LocalPair(OneQubitGate(right[0]), OneQubitGate(right[1])),
        global_phase=_wrap(phase[0]),
    )


def _clusters(values: NDArray[np.float64], tol: float) -> list[list[int]]:
    groups: list[list[int]] = [[0]]
    for i in range(1, len(values)):
        if values[i] - values[i - 1] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def _off_diagonal(m: NDArray[np.float64]) -> float:
    return float(np.max(np.abs(m - np.diag(np.diag(m)))))


def _jacobi_polish(
    p: NDArray[np.float64], re: NDArray[np.float64], im: NDArray[np.float64]
) -> NDArray[np.float64]:
    """Plane rotations of P until Pᵀ re P and Pᵀ im P are both diagonal.

    Needed when re has a small but unclustered gap: eigh then mixes those
    columns by about eps/gap, and im exposes the mixing.
    """
    p = p.copy()
    for _ in range(_JACOBI_SWEEPS):
        if max(_off_diagonal(p.T @ m @ p) for m in (re, im)) <= JACOBI_TOL:
            break
        for i in range(3):
            for j in range(i + 1, 4):
                blocks = [
                    (p[:, i] @ m @ p[:, i], p[:, j] @ m @ p[:, j], p[:, i] @ m @ p[:, j])
                    for m in (re, im)
                ]
                if all(abs(b) <= JACOBI_TOL for _, _, b in blocks):
                    continue
                g = np.zeros((2, 2))
                for a_ii, a_jj, a_ij in blocks:
                    h = np.array([a_ii - a_jj, 2 * a_ij])
                    g += np.outer(h, h)
                # Rotating by t leaves off-diagonal ½·h⊥·(cos 2t, sin 2t); maximize h·(cos 2t, sin 2t).
                _, vectors = np.linalg.eigh(g)
                cos_2t, sin_2t = vectors[:, -1]
                if cos_2t < 0:
                    cos_2t, sin_2t = -cos_2t, -sin_2t
                t = math.atan2(sin_2t, cos_2t) / 2
                c, s = math.cos(t), math.sin(t)
                col_i, col_j = p[:, i].copy(), p[:, j].copy()
                p[:, i] = c * col_i + s * col_j
                p[:, j] = -s * col_i + c * col_j
    return p


def _symmetric_eigenbasis(s: Matrix) -> NDArray[np.float64]:
    """Real orthogonal P (det +1) with Pᵀ s P diagonal, for symmetric unitary s.

    The real and imaginary parts of s commute, so diagonalizing the real part
    and then the imaginary part inside each degenerate cluster diagonalizes
    both.
    """
    re = (s.real + s.real.T) / 2
    im = (s.imag + s.imag.T) / 2
    values, p = np.linalg.eigh(re)
    for cluster in _clusters(values, EIGEN_CLUSTER_TOL):
        if len(cluster) > 1:
            sub = p[:, cluster]
            _, rotation = np.linalg.eigh(sub.T @ im @ sub)
            p[:, cluster] = sub @ rotation
    p = _jacobi_polish(p, re, im)
    if np.linalg.det(p) < 0:
        p[:, -1] *= -1
    return p


def kron_factor(k: Matrix) -> tuple[complex, Matrix, Matrix]:
    """Splits ``k ≈ g·(a ⊗ b)`` with unit-determinant a, b.

    Reshuffles k so a Kronecker product becomes the rank-one outer product
    vec(a)·vec(b)ᵀ and keeps the dominant singular term.
    """
    reshuffled = k.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    u, s, vh = np.linalg.svd(reshuffled)
    scale = math.sqrt(float(s[0]))
    a = (u[:, 0] * scale).reshape(2, 2)
    b = (vh[0, :] * scale).reshape(2, 2)
    a = a / np.sqrt(complex(np.linalg.det(a)))
    b = b / np.sqrt(complex(np.linalg.det(b)))
    g = complex(np.trace(dagger(np.kron(a, b)) @ k)) / 4
    return g, a, b


def decompose(u: TwoQubitGate | ArrayLike, *, tol: float = TOL_UNITARY) -> CanonicalDecomposition:
    m = u.matrix if isinstance(u, TwoQubitGate) else np.asarray(u, dtype=np.complex128)
    if m.shape != (4, 4):
        raise DimensionMismatch(f"expected a 4x4 matrix, got shape {m.shape}")
    check_unitary(m, tol, what="input gate")
    # Snap to the nearest unitary (polar factor).
    left_vectors, _, right_vectors = np.linalg.svd(m)
    m = left_vectors @ right_vectors

    root = cmath.exp(1j * cmath.phase(complex(np.linalg.det(m))) / 4)
    mb = MAGIC_DAG @ (m / root) @ MAGIC

    symmetric = mb.T @ mb
    p = _symmetric_eigenbasis(symmetric)
    eigenphases = np.angle(np.diag(p.T @ symmetric @ p)) / 2
    d = np.exp(1j * eigenphases)
    o_after = np.real(mb @ p @ np.diag(d.conj()))
    if np.linalg.det(o_after) < 0:
        eigenphases[-1] += math.pi
        o_after[:, -1] *= -1
    o_before = p.T

    g_after, a1, b1 = kron_factor(MAGIC @ o_after @ MAGIC_DAG)
    g_before, a2, b2 = kron_factor(MAGIC @ o_before @ MAGIC_DAG)
    w, x, y, z = _GAMMA @ eigenphases
    logger.debug("Raw interaction angles (%.6g, %.6g, %.6g)", x, y, z)

    phase = cmath.phase(root) + w + cmath.phase(g_after) + cmath.phase(g_before)
    return normalize(
        (x, y, z),
        after=LocalPair(OneQubitGate(a1), OneQubitGate(b1)),
        before=LocalPair(OneQubitGate(a2), OneQubitGate(b2)),
        global_phase=phase,
    )


def local_invariants(u: TwoQubitGate | ArrayLike) -> tuple[complex, float]:
    """Makhlin invariants (G1, G2); equal exactly for locally equivalent gates."""
    m = u.matrix if isinstance(u, TwoQubitGate) else np.asarray(u, dtype=np.complex128)
    mb = MAGIC_DAG @ m @ MAGIC
    mm = mb.T @ mb
    det = complex(np.linalg.det(m))
    tr = complex(np.trace(mm))
    g1 = tr * tr / (16 * det)
    g2 = (tr * tr - complex(np.trace(mm @ mm))) / (4 * det)
    return g1, float(g2.real)
