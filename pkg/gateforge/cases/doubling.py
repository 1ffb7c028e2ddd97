import logging
import math

from gateforge.canonical import CanonicalDecomposition
from gateforge.circuit import GateProgram
from gateforge.core import QUARTER, Extraction, core_program, define_case, near, usable
from gateforge.matrix import AXES, IDENTITY, Z, Z_AXIS, LocalPair, OneQubitGate, aligning_gate
from gateforge.types import ZZCase

logger = logging.getLogger(__name__)

_Z2 = LocalPair(IDENTITY, OneQubitGate(Z))


def doubled(cd: CanonicalDecomposition, slot: int) -> Extraction:
    """``(I⊗Z)·V′·(I⊗Z)·V′ = exp(2iθ_slot Z⊗Z)``.

    V′ is V with the slot axis turned onto ẑ on both qubits. I⊗Z
    anticommutes with the two remaining terms and so cancels them.
    """
    p = aligning_gate(AXES[slot], Z_AXIS)
    relabeled = core_program(cd).wrapped(
        before=LocalPair(p.dagger(), p.dagger()),
        after=LocalPair(p, p),
    )
    program = GateProgram.of(relabeled, _Z2, relabeled, _Z2)
    return Extraction(phi_raw=2 * cd.core.theta[slot], program=program, uses_per_w=2, slot=slot)


def _best_slot(cd: CanonicalDecomposition, tol: float, slots: tuple[int, ...]) -> int | None:
    # Largest doubled phase after reduction mod π/2; earlier slots win ties.
    best: tuple[float, int] | None = None
    for slot in slots:
        theta = cd.core.theta[slot]
        if not usable(theta, tol):
            continue
        reduced = abs(math.remainder(2 * theta, 2 * QUARTER))
        if best is None or reduced > best[0]:
            best = (reduced, slot)
    return None if best is None else best[1]


@define_case(name="relabeled-boundary", tag=ZZCase.RELABELED_BOUNDARY, priority=40)
def _relabeled_boundary(cd: CanonicalDecomposition, tol: float) -> Extraction | None:
    # Doubling θz = π/4 gives a local gate, so another slot must carry W.
    if not near(cd.core.theta_z, QUARTER, tol):
        return None
    slot = _best_slot(cd, tol, (0, 1))
    if slot is None:
        return None
    logger.debug("Doubling slot %d on the θz = π/4 face", slot)
    return doubled(cd, slot)


@define_case(name="general-doubling", tag=ZZCase.GENERAL_DOUBLING, priority=50)
def _general_doubling(cd: CanonicalDecomposition, tol: float) -> Extraction | None:
    if near(cd.core.theta_z, QUARTER, tol):
        return None
    slot = _best_slot(cd, tol, (2, 0, 1))
    if slot is None:
        return None
    return doubled(cd, slot)
