"""
Custom exceptions for fockflow
"""

from typing import Optional


class FockFlowError(Exception):
    """Base exception for fockflow"""
    pass


class ConfigurationError(FockFlowError):
    """Raised when there's a configuration error"""
    pass


class ValidationError(FockFlowError):
    """Raised when parameters are outside an operation's domain (zero alpha, bad q, ...)"""
    pass


class SingularityError(FockFlowError):
    """Raised when the wave function vanishes (|Psi| below the guard) at an evaluation point"""

    def __init__(self, point: complex, message: Optional[str] = None):
        """
        Initialize with the offending point

        Args:
            point: Evaluation point at or next to a zero of the wave function
            message: Optional override of the default message
        """
        self.point = point
        super().__init__(message or f"Wave function vanishes at z = {point}")


class ContourSingularityError(SingularityError):
    """Raised when a contour quadrature node hits a singularity"""
    pass


class SeedSingularityError(SingularityError):
    """Raised when a streamline seed sits on a singularity"""
    pass


class MagnitudeOverflowError(FockFlowError):
    """Raised when a value exceeds the representable floating point range"""
    pass


class ConvergenceDomainError(FockFlowError):
    """Raised when a series is evaluated outside its disk of convergence"""
    pass


class NonConvergenceError(FockFlowError):
    """Raised when series terms fail to decay within the allowed number of terms"""

    def __init__(self, operation: str, max_terms: int):
        self.operation = operation
        self.max_terms = max_terms
        super().__init__(f"{operation} did not converge within {max_terms} terms")


class PoleProximityError(FockFlowError):
    """Raised when a reciprocal product is evaluated too close to one of its poles"""
    pass


class IllConditionedContourError(FockFlowError):
    """Raised when a winding number is too far from an integer to be trusted"""

    def __init__(self, winding: complex, defect: float):
        self.winding = winding
        self.defect = defect
        super().__init__(
            f"Winding number {winding:.6g} has rounding defect {defect:.3g} (limit 0.25)"
        )


class MaxDepthError(FockFlowError):
    """Raised when zero isolation exceeds the subdivision depth"""
    pass


class MultiplicityCapError(FockFlowError):
    """Raised when a zero's multiplicity exceeds the configured cap"""
    pass


class UnknownIdentityError(FockFlowError):
    """Raised when a verification battery item is not registered"""

    def __init__(self, name: str, known: list):
        self.name = name
        super().__init__(f"Unknown identity '{name}'. Registered: {', '.join(known)}")


class ArtifactIOError(FockFlowError):
    """Raised when an artifact cannot be written"""
    pass


class CLIError(FockFlowError):
    """Raised when there's a CLI-related error"""
    pass
