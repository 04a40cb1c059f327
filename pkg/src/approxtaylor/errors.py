"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class ShapeError(ValueError):
    """Array dimensions do not match."""


class StepFailure(ArithmeticError):
    """The right-hand side produced a non-finite value inside a step.

    ``level`` and ``offset`` locate the failing sample: for the Taylor stepper
    they are the derivative level ``k`` and stencil offset ``i``; for an
    explicit Runge-Kutta step ``level`` is None and ``offset`` is the 0-based
    stage index.
    """

    def __init__(self, level, offset, message=None):
        self.level = level
        self.offset = offset
        if message is None:
            if level is None:
                message = f"non-finite rhs value at stage {offset}"
            else:
                message = f"non-finite rhs value at level k={level}, offset i={offset}"
        super().__init__(message)


class IntegrationError(ArithmeticError):
    """A step failed during trajectory integration.

    The trajectory computed up to (but excluding) the failing step is kept in
    ``trajectory``; ``step_index`` is the 0-based index of the failing step.
    """

    def __init__(self, step_index, trajectory, cause):
        self.step_index = step_index
        self.trajectory = trajectory
        self.cause = cause
        super().__init__(f"step {step_index} failed: {cause}")
