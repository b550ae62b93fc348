class Fp2Error(Exception):
    """Base class for all errors raised by fp2_cube_builder."""

    exit_code: int = 1


class InputError(Fp2Error, ValueError):
    """An input file or argument could not be parsed."""

    exit_code = 2


class PreconditionError(Fp2Error, ValueError):
    """A stage was called on data violating its precondition."""

    exit_code = 3


class VerificationError(Fp2Error, RuntimeError):
    """An executable law of the construction was falsified."""

    exit_code = 1


class BudgetExhausted(Fp2Error, RuntimeError):
    exit_code = 1
