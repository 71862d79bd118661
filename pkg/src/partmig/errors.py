"""Exception types shared across the package."""


class SpecFormatError(ValueError):
    """A spec document does not follow the JSON schema."""


class InvalidSpecError(ValueError):
    """A spec violates one or more admissibility invariants."""

    def __init__(self, report):
        self.report = report
        super().__init__("; ".join(str(v) for v in report.violations))


class ConvergenceError(RuntimeError):
    """An iterative method hit its iteration cap."""

    def __init__(self, message, residual=None, steps=None):
        super().__init__(message)
        self.residual = residual
        self.steps = steps


class ConsistencyError(RuntimeError):
    """Two quantities that must agree by theory disagree numerically."""
