"""Controlled rotations over W and the final CNOT assembly.

``U_v`` below is ``|0⟩⟨0|⊗I + |1⟩⟨1|⊗exp(i v·σ)`` with qubit 1 as control.
Conjugating by ``I⊗A`` turns its axis without changing the magnitude, and
products of such gates multiply their target blocks, so q copies of
``U_(0,0,2φ)`` plus one tilted copy reach a total turn of exactly π/2, which
fixed local gates convert into CNOT.
"""

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Final

import numpy as np
from numpy.typing import ArrayLike, NDArray

from gateforge.canonical import decompose
from gateforge.circuit import CompilationReport, GateProgram, evaluate, simplify
from gateforge.classify import TOL_CLASS, classify
from gateforge.errors import ImpracticalGate, PrimitiveGate, Unsolvable, VerificationFailed
from gateforge.matrix import (
    CNOT,
    H,
    IDENTITY,
    S_DAG,
    TOL_UNITARY,
    X,
    Z_AXIS,
    AxisAngle,
    LocalPair,
    Matrix,
    OneQubitGate,
    TwoQubitGate,
    aligning_gate,
    controlled,
    one_qubit_rotation,
    phase_distance,
    unit_vector,
)
from gateforge.types import GateClass
from gateforge.zz_extract import ZZPhase, extract_zz

logger = logging.getLogger(__name__)

EXACT_MULTIPLE_TOL: Final = 1e-10
SOLVE_TOL: Final = 1e-12
MAX_Q: Final = 1_000_000
TOL_VERIFY: Final = 1e-8

_HALF: Final = math.pi / 2


@dataclass(frozen=True)
class ControlledRotation:
    vector: tuple[float, float, float]

    def __post_init__(self) -> None:
        if not 0 < self.magnitude <= math.pi + 1e-12:
            raise ValueError(f"rotation magnitude {self.magnitude!r} outside (0, π]")

    @property
    def magnitude(self) -> float:
        return math.sqrt(sum(c * c for c in self.vector))

    @property
    def axis_angle(self) -> AxisAngle:
        return AxisAngle.from_vector(self.vector)

    @property
    def matrix(self) -> Matrix:
        return controlled(one_qubit_rotation(self.axis_angle).matrix)


@dataclass(frozen=True)
class CRotRealization:
    rotation: ControlledRotation
    program: GateProgram


def w_to_crot(zz: ZZPhase, w_program: GateProgram) -> CRotRealization:
    # (I⊗X e^{−iφZ})·exp(iφ Z⊗Z)·(I⊗X) = U_(0,0,2φ)
    phi = zz.phi
    fix = OneQubitGate(X @ np.diag([np.exp(-1j * phi), np.exp(1j * phi)]))
    program = GateProgram.of(
        LocalPair(IDENTITY, OneQubitGate(X)), w_program, LocalPair(IDENTITY, fix)
    )
    return CRotRealization(ControlledRotation((0.0, 0.0, 2 * phi)), program)


def conjugate_to_axis(cr: CRotRealization, axis: ArrayLike) -> CRotRealization:
    target = unit_vector(axis)
    a = aligning_gate(cr.rotation.axis_angle.axis, target)
    program = cr.program.wrapped(
        before=LocalPair(IDENTITY, a.dagger()),
        after=LocalPair(IDENTITY, a),
    )
    vector = cr.rotation.magnitude * target
    return CRotRealization(
        ControlledRotation((float(vector[0]), float(vector[1]), float(vector[2]))),
        program,
    )


def compose_rotations(a: AxisAngle, b: AxisAngle) -> AxisAngle:
    """Axis-angle of ``exp(i a·σ)·exp(i b·σ)``."""
    n1, n2 = np.asarray(a.axis), np.asarray(b.axis)
    c1, s1 = math.cos(a.magnitude), math.sin(a.magnitude)
    c2, s2 = math.cos(b.magnitude), math.sin(b.magnitude)
    cos_gamma = c1 * c2 - s1 * s2 * float(n1 @ n2)
    v = s1 * c2 * n1 + c1 * s2 * n2 - s1 * s2 * np.cross(n1, n2)
    sin_gamma = float(np.linalg.norm(v))
    gamma = math.atan2(sin_gamma, cos_gamma)
    if sin_gamma <= 1e-15:
        return AxisAngle(Z_AXIS, gamma)
    u = v / sin_gamma
    return AxisAngle((float(u[0]), float(u[1]), float(u[2])), gamma)


def solve_tilt(on_axis: float, step: float, target: float) -> NDArray[np.float64]:
    """Axis n̂ in the xz-plane so that ``step·n̂`` after ``on_axis·ẑ`` turns by ``target``."""
    denominator = math.sin(on_axis) * math.sin(step)
    if on_axis == 0 or denominator == 0:
        if abs(step - target) <= SOLVE_TOL:
            return np.array(Z_AXIS)
        raise Unsolvable(f"no tilt turns {step!r} into {target!r} without an on-axis part")
    # 1 ± cos t as products of sines, so neither side cancels near cos t = ±1.
    plus = (
        2
        * math.sin((target + on_axis - step) / 2)
        * math.sin((target - on_axis + step) / 2)
        / denominator
    )
    minus = (
        2
        * math.sin((on_axis + step + target) / 2)
        * math.sin((on_axis + step - target) / 2)
        / denominator
    )
    if plus < -SOLVE_TOL or minus < -SOLVE_TOL:
        raise Unsolvable(
            f"cannot reach {target!r} from {on_axis!r} with a step of {step!r} "
            f"(1 + cos t = {plus!r}, 1 - cos t = {minus!r})"
        )
    plus, minus = max(0.0, plus), max(0.0, minus)
    norm = (plus + minus) / 2
    return np.array([math.sqrt(plus * minus) / norm, 0.0, (plus - minus) / 2 / norm])


def synthesize_cnot(zz: ZZPhase, w_program: GateProgram) -> tuple[GateProgram, CompilationReport]:
    b = 2 * zz.phi
    q = math.floor(_HALF / b + EXACT_MULTIPLE_TOL)
    if q > MAX_Q:
        raise ImpracticalGate(f"phi={zz.phi!r} needs q={q} controlled rotations")
    on_axis = w_to_crot(zz, w_program)
    remainder = _HALF - q * b
    if remainder <= EXACT_MULTIPLE_TOL:
        crots = on_axis.program * q
        logger.debug("π/2 is %d whole steps of %.12g", q, b)
    else:
        tilt = solve_tilt(q * b, b, _HALF)
        tilted = conjugate_to_axis(on_axis, tilt)
        composed = compose_rotations(tilted.rotation.axis_angle, AxisAngle(Z_AXIS, q * b))
        align = aligning_gate(composed.axis, Z_AXIS)
        crots = GateProgram.of(on_axis.program * q, tilted.program).wrapped(
            before=LocalPair(IDENTITY, align.dagger()),
            after=LocalPair(IDENTITY, align),
        )
        logger.debug(
            "%d steps of %.12g plus one tilted step, residual %.12g", q, b, remainder
        )
    # CNOT = (S†⊗H)·U_(0,0,π/2)·(I⊗H)
    program = GateProgram.of(
        LocalPair(IDENTITY, OneQubitGate(H)),
        crots,
        LocalPair(OneQubitGate(S_DAG), OneQubitGate(H)),
    )
    report = CompilationReport(
        theta=zz.core.theta,
        gate_class=GateClass.IMPRIMITIVE,
        phi=zz.phi,
        case=zz.case,
        q=q,
        uses_of_u=program.uses_of_u,
        one_qubit_gate_count=program.local_count,
    )
    return program, report


def compile_cnot(
    u: TwoQubitGate | ArrayLike,
    *,
    tol_unitary: float = TOL_UNITARY,
    tol_class: float = TOL_CLASS,
    tol_verify: float = TOL_VERIFY,
) -> tuple[GateProgram, CompilationReport]:
    """Builds a program that turns black-box uses of ``u`` into CNOT.

    Raises VerificationFailed when replaying the program on ``u`` misses CNOT
    by more than ``tol_verify``.
    """
    cd = decompose(u, tol=tol_unitary)
    gate_class = classify(cd, tol_class)
    if gate_class is not GateClass.IMPRIMITIVE:
        raise PrimitiveGate(gate_class)
    zz, w_program = extract_zz(cd, tol_class)
    program, report = synthesize_cnot(zz, w_program)
    program = simplify(program)
    m = u.matrix if isinstance(u, TwoQubitGate) else np.asarray(u, dtype=np.complex128)
    residual = phase_distance(evaluate(program, m), CNOT)
    if residual > tol_verify:
        raise VerificationFailed(residual, tol_verify)
    report = dataclasses.replace(
        report,
        one_qubit_gate_count=program.local_count,
        verification_residual=residual,
    )
    if not report.within_bound:
        logger.warning(
            "%d uses of U exceed 2q+4 = %d for theta_max=%.6g",
            report.uses_of_u,
            2 * report.bound_q + 4,
            report.theta_max,
        )
    logger.debug("Compiled CNOT with %d uses of U, residual %.3g", report.uses_of_u, residual)
    return program, report
