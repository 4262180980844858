#!/usr/bin/env python3
"""
Errors - Exception types shared by the core modules
Mathematical failures are reported as verdicts; these are for broken inputs and broken invariants
"""


class QhamError(Exception):
    """Root of every error raised by the verifier itself"""


class InvalidOperandError(QhamError, ZeroDivisionError):
    """Inversion or division by an exact zero"""


class RadicandMismatchError(QhamError, ValueError):
    """Operands built over different quadratic fields"""

    def __init__(self, left, right):
        super().__init__(f"Radicand mismatch: sqrt({left}) vs sqrt({right}); operands must share one field")
        self.left = left
        self.right = right


class ConstructionError(QhamError):
    """A construction-time identity failed; the message names the identity"""

    def __init__(self, identity, details=None):
        super().__init__(f"Construction invariant violated: {identity}" + (f" ({details})" if details else ""))
        self.identity = identity
        self.details = details or {}


class ConsistencyError(QhamError):
    """Two independent computations of the same quantity disagree"""

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}


class FalsificationError(QhamError):
    """An operation whose contract is an identity found a counterexample"""

    def __init__(self, identity, witness):
        super().__init__(f"Falsified: {identity} -> {witness}")
        self.identity = identity
        self.witness = witness
