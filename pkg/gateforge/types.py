from enum import StrEnum
from typing import Literal, NotRequired, TypedDict


class GateClass(StrEnum):
    PRIMITIVE_LOCAL = "primitive-local"
    PRIMITIVE_SWAP = "primitive-swap"
    IMPRIMITIVE = "imprimitive"


class ZZCase(StrEnum):
    DIRECT_ZZ = "direct-zz"
    GENERAL_DOUBLING = "general-doubling"
    SINGLE_PI4 = "single-pi4"
    DOUBLE_PI4 = "double-pi4"
    RELABELED_BOUNDARY = "relabeled-boundary"


ReportFormat = Literal["text", "json"]

# [re, im]
ComplexDoc = list[float]
MatrixDoc = list[list[ComplexDoc]]

PROGRAM_FORMAT = "gateforge-program/1"
GATE_FORMAT = "gateforge-gate/1"


class ProgramStepDoc(TypedDict):
    type: Literal["u", "local"]
    a: NotRequired[MatrixDoc]
    b: NotRequired[MatrixDoc]


class ProgramDoc(TypedDict):
    format: str
    steps: list[ProgramStepDoc]


class GateDoc(TypedDict):
    format: str
    matrix: MatrixDoc


class LocalPairDoc(TypedDict):
    a: MatrixDoc
    b: MatrixDoc


class CanonicalDoc(TypedDict):
    theta: list[float]
    global_phase: float
    after: LocalPairDoc
    before: LocalPairDoc


ReportDoc = TypedDict(
    "ReportDoc",
    {
        "theta": list[float],
        "class": str,
        "phi": float,
        "case": str,
        "q": int,
        "uses_of_u": int,
        "one_qubit_gates": int,
        "lower_bound": float,
        "ratio": float,
        "residual": float | None,
    },
)


class ConfigDoc(TypedDict, total=False):
    tol_unitary: float
    tol_class: float
    tol_verify: float
    format: ReportFormat
    seed: int
