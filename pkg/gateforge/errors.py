from gateforge.types import GateClass


class GateforgeError(Exception):
    pass


class DimensionMismatch(GateforgeError, ValueError):
    pass


class NonUnitaryInput(GateforgeError, ValueError):
    pass


class NotNormalized(GateforgeError, ValueError):
    pass


class PrimitiveGate(GateforgeError):
    def __init__(self, gate_class: GateClass) -> None:
        kind = "swap" if gate_class is GateClass.PRIMITIVE_SWAP else "local"
        super().__init__(f"gate is primitive ({kind}) and cannot produce a CNOT")
        self.gate_class = gate_class


class NonEntanglingPhase(GateforgeError, ValueError):
    pass


class Unsolvable(GateforgeError, ArithmeticError):
    pass


class ImpracticalGate(GateforgeError):
    pass


class ParseError(GateforgeError, ValueError):
    def __init__(self, reason: str, position: str) -> None:
        super().__init__(f"{position}: {reason}")
        self.reason = reason
        self.position = position


class NonUnitaryLocal(ParseError):
    pass


class VerificationFailed(GateforgeError):
    def __init__(self, residual: float, tol: float) -> None:
        super().__init__(f"program misses CNOT by {residual:.3g} (limit {tol:.3g})")
        self.residual = residual
        self.tol = tol
