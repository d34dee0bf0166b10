"""Exception types shared across the package."""


class FormatError(ValueError):
    """Malformed input file or structurally invalid embedding data."""


class DomainError(ValueError):
    """Input violates an operation's precondition (e.g. disconnected graph)."""


class InvalidFrameError(DomainError):
    """A face of the would-be frame is not bounded by a cycle."""


class ContractViolation(RuntimeError):
    """An internal invariant failed; indicates a bug, not bad input."""
