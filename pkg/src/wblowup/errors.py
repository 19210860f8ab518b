"""Exception hierarchy shared across the package.

Two families: ``InputError`` for anything the caller can fix by changing
the input (bad matrices, bad polynomials, invalid setups), and
``InvariantViolation`` for internal consistency failures.  The CLI maps
the first to exit status 1 and the second to exit status 2.
"""


class InputError(ValueError):
    pass


class InvariantViolation(RuntimeError):
    pass
