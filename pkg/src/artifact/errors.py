"""Exception types shared by every module and mapped to CLI exit codes."""


class PreconditionError(ValueError):
    """Input violates a documented precondition (CLI exit code 2)."""


class ResourceCeilingError(RuntimeError):
    """A configured work ceiling would be exceeded (CLI exit code 3).

    ``size`` carries the amount of work that was requested so the caller
    can decide whether to raise the ceiling and retry.
    """

    def __init__(self, message: str, size: int, ceiling: int):
        super().__init__(f"{message} (size {size} > ceiling {ceiling})")
        self.size = size
        self.ceiling = ceiling
