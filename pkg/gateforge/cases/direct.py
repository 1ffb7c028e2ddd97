import math

from gateforge.canonical import CanonicalDecomposition
from gateforge.core import QUARTER, TOL_DRIFT, Extraction, core_program, define_case, near
from gateforge.types import ZZCase


@define_case(name="direct-zz", tag=ZZCase.DIRECT_ZZ, priority=10)
def _direct_zz(cd: CanonicalDecomposition, tol: float) -> Extraction | None:
    x, y, z = cd.core.theta
    if abs(x) > tol or abs(y) > tol or not tol < z < QUARTER - tol:
        return None
    # About π/(4θz) uses follow; otherwise general-doubling cancels θx and θy.
    if (math.pi / (4 * z) + 2) * math.hypot(x, y) > TOL_DRIFT:
        return None
    return Extraction(phi_raw=z, program=core_program(cd), uses_per_w=1)


# The CNOT class: U already is exp(iπ/4 Z⊗Z) up to locals.
@define_case(name="single-pi4", tag=ZZCase.SINGLE_PI4, priority=20)
def _single_pi4(cd: CanonicalDecomposition, tol: float) -> Extraction | None:
    x, y, z = cd.core.theta
    if abs(x) > tol or abs(y) > tol or not near(z, QUARTER, tol):
        return None
    return Extraction(phi_raw=QUARTER, program=core_program(cd), uses_per_w=1)
