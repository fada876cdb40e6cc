"""Exception hierarchy"""

from typing import Any, List, Optional


class HybridFlowError(Exception):
    """Base class for all hybridflow errors"""


class NormalizationError(HybridFlowError, ValueError):
    """Amplitudes are not unit-normalized"""

    def __init__(self, norm: float, tolerance: float):
        self.norm = norm
        self.tolerance = tolerance
        super().__init__(f"State is not normalized: norm = {norm:.17g} (tolerance {tolerance:g})")

    def __reduce__(self):
        return (type(self), (self.norm, self.tolerance))


class ConstraintViolationError(HybridFlowError, ValueError):
    """Quantum phase point is off the constraint sphere"""

    def __init__(self, value: float, tolerance: float):
        self.value = value
        self.tolerance = tolerance
        super().__init__(
            f"Constraint value C = {value:.17g} differs from 1 by more than {tolerance:g}"
        )

    def __reduce__(self):
        return (type(self), (self.value, self.tolerance))


class DimensionMismatchError(HybridFlowError, ValueError):
    """Operands have incompatible dimensions"""

    def __init__(self, what: str, expected: Any, actual: Any):
        self.what = what
        self.expected = expected
        self.actual = actual
        super().__init__(f"Dimension mismatch for {what}: expected {expected}, got {actual}")

    def __reduce__(self):
        return (type(self), (self.what, self.expected, self.actual))


class IntegrityError(HybridFlowError):
    """A value violates a structural invariant (Hermiticity, realness, positivity)"""


class UnsupportedError(HybridFlowError):
    """Operation is not available for the given input"""


class StepFailureError(HybridFlowError):
    """Implicit step did not converge"""

    def __init__(
        self,
        residual: float,
        iterations: int,
        step_index: Optional[int] = None,
    ):
        self.residual = residual
        self.iterations = iterations
        self.step_index = step_index
        where = f" at step {step_index}" if step_index is not None else ""
        super().__init__(
            f"Implicit solve failed{where}: residual {residual:.3e} after {iterations} iterations"
        )

    def __reduce__(self):
        return (type(self), (self.residual, self.iterations, self.step_index))

    def at_step(self, step_index: int) -> "StepFailureError":
        """Copy of this error tagged with the trajectory step index"""
        return StepFailureError(self.residual, self.iterations, step_index)


class SamplerError(HybridFlowError):
    """Initial-condition sampler cannot produce usable samples"""


class ConfigValidationError(HybridFlowError, ValueError):
    """Run configuration has one or more diagnostics"""

    def __init__(self, diagnostics: List[Any]):
        self.diagnostics = list(diagnostics)
        lines = "; ".join(str(d) for d in self.diagnostics)
        super().__init__(f"{len(self.diagnostics)} config problem(s): {lines}")

    def __reduce__(self):
        return (type(self), (self.diagnostics,))
