from gateforge.canonical import CanonicalDecomposition
from gateforge.circuit import GateProgram
from gateforge.core import QUARTER, Extraction, core_program, define_case, near
from gateforge.matrix import (
    IDENTITY,
    X_AXIS,
    Y_AXIS,
    AxisAngle,
    LocalPair,
    aligning_gate,
    one_qubit_rotation,
)
from gateforge.types import ZZCase

# exp(iπ/4 X) on qubit 1.
_QUARTER_X = LocalPair(one_qubit_rotation(AxisAngle(X_AXIS, QUARTER)), IDENTITY)


@define_case(name="double-pi4", tag=ZZCase.DOUBLE_PI4, priority=30)
def _double_pi4(cd: CanonicalDecomposition, tol: float) -> Extraction | None:
    """θ = (π/4, π/4, 0), locally iSWAP.

    V = exp(iπ/4 (XX + ZZ)) has V⁸ = I, so V·exp(iπ/4 X⊗I)·V⁷ is
    exp(iπ/4 V(X⊗I)V†) = exp(−iπ/4 Y⊗Z). A qubit-1 local taking Y to −Z
    turns that into exp(iπ/4 Z⊗Z).
    """
    x, y, z = cd.core.theta
    if not (near(z, QUARTER, tol) and near(x, QUARTER, tol) and abs(y) <= tol):
        return None
    v = core_program(cd)
    w = aligning_gate(Y_AXIS, (0.0, 0.0, -1.0))
    program = GateProgram.of(v * 7, _QUARTER_X, v).wrapped(
        before=LocalPair(w.dagger(), IDENTITY),
        after=LocalPair(w, IDENTITY),
    )
    return Extraction(phi_raw=QUARTER, program=program, uses_per_w=8)
