"""Turning an imprimitive gate into ``W = exp(iφ Z⊗Z)``.

Each extraction case lives in ``gateforge.cases`` and registers itself with
``define_case``; cases are tried in priority order and the first match wins.
The raw phase is then reduced into (0, π/4] with local gates only.
"""

import logging
import math
from dataclasses import dataclass
from typing import Final

from gateforge import cases  # noqa: F401, pylint: disable=unused-import
from gateforge.canonical import CanonicalDecomposition, InteractionContent
from gateforge.circuit import GateProgram
from gateforge.classify import classify
from gateforge.core import CASES, QUARTER, TOL_CASE
from gateforge.errors import NonEntanglingPhase, PrimitiveGate
from gateforge.matrix import I2, IDENTITY, X, Z, LocalPair, OneQubitGate
from gateforge.types import GateClass, ZZCase

logger = logging.getLogger(__name__)

_HALF: Final = math.pi / 2


@dataclass(frozen=True)
class ZZPhase:
    phi: float
    case: ZZCase
    uses_per_w: int
    phi_raw: float
    slot: int
    core: InteractionContent


@dataclass(frozen=True)
class PhaseReduction:
    """``exp(iφ Z⊗Z) ≅ after · exp(i·phi_raw·Z⊗Z) · before``."""

    phi: float
    before: LocalPair
    after: LocalPair
    sign_flip: bool
    shifts: int


def reduce_phase(phi_raw: float, tol: float = TOL_CASE) -> PhaseReduction:
    # exp(i(p ± π/2) Z⊗Z) = exp(ip Z⊗Z)·(±i Z⊗Z), and I⊗X flips the sign of p.
    p = phi_raw
    shifts = 0
    while p <= -QUARTER:
        p += _HALF
        shifts += 1
    while p > QUARTER:
        p -= _HALF
        shifts += 1
    if abs(p) <= tol:
        raise NonEntanglingPhase(
            f"phase {phi_raw!r} is a multiple of π/2; exp(iφ Z⊗Z) would be local"
        )
    sign_flip = p < 0
    z = Z if shifts % 2 else I2
    x = X if sign_flip else I2
    before = LocalPair(OneQubitGate(z), OneQubitGate(z @ x))
    after = LocalPair(IDENTITY, OneQubitGate(x))
    return PhaseReduction(abs(p), before, after, sign_flip, shifts)


def extract_zz(cd: CanonicalDecomposition, tol: float = TOL_CASE) -> tuple[ZZPhase, GateProgram]:
    gate_class = classify(cd, tol)
    if gate_class is not GateClass.IMPRIMITIVE:
        raise PrimitiveGate(gate_class)
    for case in CASES:
        extraction = case(cd, tol)
        if extraction is None:
            continue
        reduction = reduce_phase(extraction.phi_raw, tol)
        program = extraction.program.wrapped(reduction.before, reduction.after)
        zz = ZZPhase(
            phi=reduction.phi,
            case=case.tag,
            uses_per_w=extraction.uses_per_w,
            phi_raw=extraction.phi_raw,
            slot=extraction.slot,
            core=cd.core,
        )
        logger.debug("Extracted %s with phi=%.12g", zz.case, zz.phi)
        return zz, program
    raise AssertionError(f"no extraction case covers {cd.core.theta}")
