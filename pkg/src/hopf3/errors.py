"""Exception taxonomy shared by every module.

Two families only: DomainError for bad inputs (CLI exit code 1) and
IntegrityError for internal consistency failures (CLI exit code 2).
Each carries a stable machine-readable ``code``.
"""


class Hopf3Error(Exception):
    code = "error"

    def __init__(self, message, code=None):
        super().__init__(message)
        if code is not None:
            self.code = code


class DomainError(Hopf3Error, ValueError):
    """Invalid input: bad rationals, roster mismatches, inadmissible parameters."""

    code = "domain-error"


class IntegrityError(Hopf3Error, RuntimeError):
    """Internal invariant violated: nonzero residual, imaginary Lyapunov part."""

    code = "integrity-error"
