"""Gate programs over a black-box two-qubit gate U.

Step order is temporal order: the first step acts first, so ``evaluate``
returns ``M_k ··· M_2 M_1``. Programs never store a global phase; every
comparison goes through ``phase_distance``.
"""

import json
import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Any, Final, cast

import numpy as np
from numpy.typing import ArrayLike

from gateforge.errors import DimensionMismatch, NonUnitaryInput, NonUnitaryLocal, ParseError
from gateforge.matrix import (
    I4,
    TOL_IDENTITY,
    TOL_UNITARY,
    LocalPair,
    Matrix,
    OneQubitGate,
    TwoQubitGate,
    Vector3,
    check_unitary,
)
from gateforge.types import (
    GATE_FORMAT,
    PROGRAM_FORMAT,
    GateClass,
    GateDoc,
    MatrixDoc,
    ProgramDoc,
    ProgramStepDoc,
    ReportDoc,
    ZZCase,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ApplyU:
    pass


@dataclass(frozen=True, eq=False)
class Local:
    pair: LocalPair


# U is never inverted; there is no U† step.
GateStep = ApplyU | Local

APPLY_U: Final = ApplyU()


@dataclass(frozen=True, eq=False)
class GateProgram:
    steps: tuple[GateStep, ...] = ()

    @classmethod
    def of(cls, *parts: "GateStep | GateProgram | LocalPair") -> "GateProgram":
        steps: list[GateStep] = []
        for part in parts:
            if isinstance(part, GateProgram):
                steps.extend(part.steps)
            elif isinstance(part, LocalPair):
                steps.append(Local(part))
            else:
                steps.append(part)
        return cls(tuple(steps))

    @property
    def uses_of_u(self) -> int:
        return sum(1 for step in self.steps if isinstance(step, ApplyU))

    @property
    def local_count(self) -> int:
        return sum(1 for step in self.steps if isinstance(step, Local))

    def __add__(self, later: "GateProgram") -> "GateProgram":
        return GateProgram(self.steps + later.steps)

    def __mul__(self, times: int) -> "GateProgram":
        return GateProgram(self.steps * times)

    def wrapped(self, before: LocalPair, after: LocalPair) -> "GateProgram":
        """``after · self · before``."""
        return GateProgram.of(before, self, after)


def _as_matrix(u: TwoQubitGate | ArrayLike) -> Matrix:
    if isinstance(u, TwoQubitGate):
        return u.matrix
    m = np.asarray(u, dtype=np.complex128)
    if m.shape != (4, 4):
        raise DimensionMismatch(f"U must be 4x4, got shape {m.shape}")
    return m


def evaluate(p: GateProgram, u: TwoQubitGate | ArrayLike) -> Matrix:
    um = _as_matrix(u)
    result = np.array(I4)
    for step in p.steps:
        result = (um if isinstance(step, ApplyU) else step.pair.matrix) @ result
    return result


def simplify(p: GateProgram, *, tol: float = TOL_IDENTITY) -> GateProgram:
    merged: list[GateStep] = []
    for step in p.steps:
        last = merged[-1] if merged else None
        if isinstance(step, Local) and isinstance(last, Local):
            merged[-1] = Local(last.pair.then(step.pair))
        else:
            merged.append(step)
    steps = tuple(s for s in merged if not (isinstance(s, Local) and s.pair.is_identity(tol)))
    logger.debug(
        "Simplified program from %d to %d steps (%d uses of U)",
        len(p.steps),
        len(steps),
        p.uses_of_u,
    )
    return GateProgram(steps)


def structurally_equal(p: GateProgram, q: GateProgram, *, tol: float = 1e-15) -> bool:
    if len(p.steps) != len(q.steps):
        return False
    for a, b in zip(p.steps, q.steps, strict=True):
        if isinstance(a, ApplyU) or isinstance(b, ApplyU):
            if type(a) is not type(b):
                return False
            continue
        for fa, fb in ((a.pair.first, b.pair.first), (a.pair.second, b.pair.second)):
            if np.max(np.abs(fa.matrix - fb.matrix)) > tol:
                return False
    return True


def encode_matrix(m: ArrayLike) -> MatrixDoc:
    a = np.asarray(m, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def decode_matrix(doc: object, size: int, position: str) -> Matrix:
    if not isinstance(doc, list) or len(doc) != size:
        raise ParseError(f"expected {size} rows", position)
    m = np.zeros((size, size), dtype=np.complex128)
    for i, row in enumerate(doc):
        if not isinstance(row, list) or len(row) != size:
            raise ParseError(f"expected {size} entries", f"{position}[{i}]")
        for j, entry in enumerate(row):
            where = f"{position}[{i}][{j}]"
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or not all(isinstance(c, int | float) and not isinstance(c, bool) for c in entry)
            ):
                raise ParseError("expected a complex number as [re, im]", where)
            value = complex(entry[0], entry[1])
            if not math.isfinite(value.real) or not math.isfinite(value.imag):
                raise ParseError("non-finite complex entry", where)
            m[i, j] = value
    return m


def _load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, f"line {e.lineno} column {e.colno}") from e


def _check_format(doc: Any, expected: str, fields: Iterable[str]) -> dict[str, Any]:
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object", "$")
    if doc.get("format") != expected:
        raise ParseError(f"expected format {expected!r}, got {doc.get('format')!r}", "format")
    for key in doc:
        if key not in fields:
            raise ParseError(f"unexpected field {key!r}", key)
    return cast(dict[str, Any], doc)


def serialize(p: GateProgram) -> str:
    steps: list[ProgramStepDoc] = []
    for step in p.steps:
        if isinstance(step, ApplyU):
            steps.append({"type": "u"})
        else:
            steps.append(
                {
                    "type": "local",
                    "a": encode_matrix(step.pair.first.matrix),
                    "b": encode_matrix(step.pair.second.matrix),
                }
            )
    doc: ProgramDoc = {"format": PROGRAM_FORMAT, "steps": steps}
    return json.dumps(doc, indent=2) + "\n"


def _parse_factor(step: dict[str, Any], key: str, position: str, tol: float) -> OneQubitGate:
    if key not in step:
        raise ParseError(f"local step is missing {key!r}", position)
    where = f"{position}.{key}"
    m = decode_matrix(step[key], 2, where)
    try:
        return OneQubitGate(m, tol)
    except NonUnitaryInput as e:
        raise NonUnitaryLocal(str(e), where) from e


def parse(text: str, *, tol: float = TOL_UNITARY) -> GateProgram:
    doc = _check_format(_load_json(text), PROGRAM_FORMAT, ("format", "steps"))
    raw_steps = doc.get("steps")
    if not isinstance(raw_steps, list):
        raise ParseError("expected a list of steps", "steps")
    steps: list[GateStep] = []
    for i, raw in enumerate(raw_steps):
        position = f"steps[{i}]"
        if not isinstance(raw, dict):
            raise ParseError("step must be a JSON object", position)
        kind = raw.get("type")
        if kind == "u":
            if set(raw) != {"type"}:
                raise ParseError("'u' steps carry no payload", position)
            steps.append(APPLY_U)
        elif kind == "local":
            if set(raw) - {"type", "a", "b"}:
                raise ParseError("unexpected field in local step", position)
            a = _parse_factor(raw, "a", position, tol)
            b = _parse_factor(raw, "b", position, tol)
            steps.append(Local(LocalPair(a, b)))
        else:
            raise ParseError(f"unknown step type {kind!r}", f"{position}.type")
    return GateProgram(tuple(steps))


def serialize_gate(m: ArrayLike) -> str:
    doc: GateDoc = {"format": GATE_FORMAT, "matrix": encode_matrix(m)}
    return json.dumps(doc, indent=2) + "\n"


def parse_gate(text: str) -> Matrix:
    """Reads a gate file; unitarity is checked by the consumer's tolerance."""
    doc = _check_format(_load_json(text), GATE_FORMAT, ("format", "matrix"))
    if "matrix" not in doc:
        raise ParseError("missing matrix", "matrix")
    return decode_matrix(doc["matrix"], 4, "matrix")


@dataclass(frozen=True)
class CompilationReport:
    """Accounting for one compiled CNOT.

    ``one_qubit_gate_count`` is the number of Local steps after merging. The
    "about 6q one-qubit gates" estimate counts individual gates before
    merging, so it runs higher than this figure.
    """

    theta: Vector3
    gate_class: GateClass
    phi: float
    case: ZZCase
    q: int
    uses_of_u: int
    one_qubit_gate_count: int
    verification_residual: float | None = None

    @property
    def theta_max(self) -> float:
        return self.theta[2]

    @property
    def lower_bound_uses(self) -> float:
        return math.pi / (4 * self.theta_max)

    @property
    def ratio(self) -> float:
        return self.uses_of_u / self.lower_bound_uses

    @property
    def bound_q(self) -> int:
        return math.floor(math.pi / (8 * self.theta_max))

    @property
    def within_bound(self) -> bool:
        return self.uses_of_u <= 2 * self.bound_q + 4

    def to_doc(self) -> ReportDoc:
        return {
            "theta": list(self.theta),
            "class": str(self.gate_class),
            "phi": self.phi,
            "case": str(self.case),
            "q": self.q,
            "uses_of_u": self.uses_of_u,
            "one_qubit_gates": self.one_qubit_gate_count,
            "lower_bound": self.lower_bound_uses,
            "ratio": self.ratio,
            "residual": self.verification_residual,
        }

    def to_text(self) -> str:
        lines = []
        for key, value in self.to_doc().items():
            lines.append(f"{key}: {format_value(value)}")
        lines.append(f"within_bound: {self.within_bound}")
        return "\n".join(lines)


def format_value(value: object) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, list):
        return "[" + ", ".join(format_value(v) for v in value) + "]"
    if value is None:
        return "-"
    return str(value)
