"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class VerifierError(Exception):
    """Base class for every error raised by the toolkit."""


class NotPrime(VerifierError, ValueError):
    pass


class ClassNumberNotOne(VerifierError):
    """The field violates the class-number-one standing assumption."""


class UnsupportedRing(VerifierError):
    """Internal consistency checks on the ring failed."""


class ZeroModulus(VerifierError, ZeroDivisionError):
    pass


class GeneratorSearchExhausted(VerifierError):
    """No element of the requested norm was found within the search bound."""


class NonIntegralR(VerifierError, ArithmeticError):
    pass


class NonIntegralLambda(VerifierError, ArithmeticError):
    pass


class DNotDividesN(VerifierError, ValueError):
    pass


class LNotCoprimeToD(VerifierError, ValueError):
    pass


class PreconditionFailed(VerifierError, ValueError):
    pass


class PoleProximity(VerifierError, ArithmeticError):
    pass


class RegimeExceeded(VerifierError, ValueError):
    """Argument outside the validated window of a special-function routine."""


class QuadratureFailure(VerifierError, ArithmeticError):
    pass


class TruncationBudgetExceeded(VerifierError):
    pass


class UnknownSuite(VerifierError, KeyError):
    pass


class ConfigInvalid(VerifierError, ValueError):
    pass


class IoFailure(VerifierError, OSError):
    pass
