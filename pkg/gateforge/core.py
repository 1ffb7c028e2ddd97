import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any, Final

from gateforge.canonical import CanonicalDecomposition
from gateforge.circuit import APPLY_U, GateProgram, Local
from gateforge.types import ZZCase

logger = logging.getLogger(__name__)

QUARTER: Final = math.pi / 4
TOL_CASE: Final = 1e-8
# Largest XX/YY residue a Z⊗Z case may let build up over all its uses of U.
TOL_DRIFT: Final = 1e-10


@dataclass(frozen=True)
class Extraction:
    """A program realizing ``exp(i·phi_raw·Z⊗Z)`` before phase reduction."""

    phi_raw: float
    program: GateProgram
    uses_per_w: int
    # Interaction slot (0 = x, 1 = y, 2 = z) that supplied phi_raw.
    slot: int = 2


Build = Callable[[CanonicalDecomposition, float], Extraction | None]


@dataclass
class ExtractionCase:
    name: str
    tag: ZZCase
    priority: int
    build: Build

    def __call__(self, cd: CanonicalDecomposition, tol: float) -> Extraction | None:
        extraction = self.build(cd, tol)
        if extraction is not None:
            logger.debug(
                "Case %s matched %s: phi_raw=%.12g, %d uses",
                self.name,
                cd.core.theta,
                extraction.phi_raw,
                extraction.uses_per_w,
            )
        return extraction


CASES: list[ExtractionCase] = []


def define_case(**kwargs: Any) -> Callable[[Build], Build]:
    def _inner_define_case(build: Build) -> Build:
        CASES.append(ExtractionCase(build=build, **kwargs))
        CASES.sort(key=lambda case: case.priority)
        return build

    return _inner_define_case


def near(value: float, target: float, tol: float) -> bool:
    return abs(value - target) <= tol


def usable(angle: float, tol: float) -> bool:
    """Strictly between 0 and π/4 in magnitude, with tol margins."""
    return tol < abs(angle) < QUARTER - tol


def core_program(cd: CanonicalDecomposition) -> GateProgram:
    """Realizes ``exp(i(θx XX + θy YY + θz ZZ))`` from one use of U."""
    return GateProgram((Local(cd.before.dagger()), APPLY_U, Local(cd.after.dagger())))
