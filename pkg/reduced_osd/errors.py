"""Exceptions raised by the reduced-GE OSD library."""

from __future__ import annotations

# -------------------------------
# region Base
# -------------------------------


class ReducedOsdError(Exception):
    """Base exception for all library errors."""


class ConfigError(ReducedOsdError):
    """Exception raised when a simulation or CLI configuration is invalid."""

    def __init__(self, message: str = "Invalid configuration") -> None:
        """Initialize ConfigError."""
        super().__init__(message)


# -------------------------------
# region Linear Algebra
# -------------------------------


class DimensionMismatchError(ReducedOsdError, ValueError):
    """Exception raised when operand sizes do not fit together."""

    def __init__(self, message: str = "Dimension mismatch") -> None:
        """Initialize DimensionMismatchError."""
        super().__init__(message)


class RankDeficientError(ReducedOsdError):
    """Exception raised when an elimination finds fewer pivots than required."""

    def __init__(self, rank: int, required: int | None = None) -> None:
        """Initialize RankDeficientError with the rank that was found."""
        self.rank = rank
        self.required = required
        if required is None:
            super().__init__(f"Matrix is rank deficient (rank {rank})")
        else:
            super().__init__(
                f"Matrix is rank deficient (rank {rank}, required {required})"
            )


# -------------------------------
# region Codes
# -------------------------------


class CodeParseError(ReducedOsdError):
    """Exception raised when a generator-matrix file is malformed."""

    def __init__(self, message: str = "Malformed generator matrix file") -> None:
        """Initialize CodeParseError."""
        super().__init__(message)


class UnsupportedDegreeError(ReducedOsdError):
    """Exception raised for an extension degree without a primitive polynomial."""

    def __init__(self, m: int) -> None:
        """Initialize UnsupportedDegreeError."""
        self.m = m
        super().__init__(f"Unsupported extension degree m={m} (expected 3..16)")


# -------------------------------
# region Decoding
# -------------------------------


class InvalidAlphaError(ReducedOsdError, ValueError):
    """Exception raised when the three-stage split does not fit the partition."""

    def __init__(self, alpha: int, b_lr: int) -> None:
        """Initialize InvalidAlphaError."""
        self.alpha = alpha
        self.b_lr = b_lr
        super().__init__(f"alpha must satisfy 0 < alpha < {b_lr}, got {alpha}")


class InvalidBmaxError(ReducedOsdError, ValueError):
    """Exception raised for a non-positive or non-binding B_max."""

    def __init__(self, message: str = "B_max must be at least 1") -> None:
        """Initialize InvalidBmaxError."""
        super().__init__(message)


class InvalidArgumentsError(ReducedOsdError, ValueError):
    """Exception raised when cost-model arguments are out of range."""

    def __init__(self, message: str = "Invalid arguments") -> None:
        """Initialize InvalidArgumentsError."""
        super().__init__(message)


class CandidateCountOverflowError(ReducedOsdError, OverflowError):
    """Exception raised when L(i) does not fit the 64-bit candidate counter."""

    def __init__(self, k: int, order: int) -> None:
        """Initialize CandidateCountOverflowError."""
        super().__init__(f"Candidate count for k={k}, order={order} overflows")


class PartitionInvariantError(ReducedOsdError):
    """Exception raised when |B_K,LR| != |P_N-K,MR| for a constructed partition."""

    def __init__(self, b_lr: int, p_mr: int) -> None:
        """Initialize PartitionInvariantError."""
        super().__init__(f"Partition invariant violated: |B_K,LR|={b_lr}, |P_N-K,MR|={p_mr}")
