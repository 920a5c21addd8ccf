"""Exception types shared across the toolkit."""


class BlackBox2Error(Exception):
    """Base class for all toolkit errors."""


class NotPrime(BlackBox2Error):
    pass


class InvalidDegree(BlackBox2Error):
    pass


class DivisionByZero(BlackBox2Error):
    pass


class ContextMismatch(BlackBox2Error):
    pass


class SingularMatrix(BlackBox2Error):
    pass


class RetryBudgetExhausted(BlackBox2Error):
    """A Las Vegas stage ran out of retries; the run failed, no result is emitted."""


class ExponentViolated(BlackBox2Error):
    """x^E != 1 for the handle's global exponent E; signals a backend bug."""


class ExceedsKMax(BlackBox2Error):
    """Field-size search found no feasible extension degree below the given bound."""


class Undecided(BlackBox2Error):
    """Involution type test collected no certificate within its sample budget."""


class DivisorUnavailable(BlackBox2Error):
    """The required subfield torus divisor does not divide the torus order."""


class InvalidSubfieldDegree(BlackBox2Error):
    pass


class UnsupportedFlavor(BlackBox2Error):
    pass


class Overflow(BlackBox2Error):
    """Closure enumeration exceeded its element cap."""
