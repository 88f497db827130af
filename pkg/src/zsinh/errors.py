"""Exception types shared across the package.

``DomainError`` marks violated preconditions (bad parameters, a method not
applicable to a model, a contour leaving the declared analyticity region).
``NumericalError`` marks failures detected at run time (non-convergence,
overflow guards, branch-cut winding).  The CLI maps them to exit codes
2 and 3 respectively.
"""


class DomainError(ValueError):
    """A precondition on parameters or analyticity metadata is violated."""


class NumericalError(RuntimeError):
    """A numerical safeguard fired (non-convergence, overflow, winding)."""
