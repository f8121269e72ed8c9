"""Exception hierarchy shared by all modules of the package."""


class HochschildError(Exception):
    """Base class for every error raised by this package."""


class NotPrime(HochschildError):
    """The requested modulus is not a prime number."""


class ContainmentViolation(HochschildError):
    """A subspace that should be contained in another is not."""


class NotACocycle(HochschildError):
    """A vector expected to lie in the cocycle space does not."""


class AssociativityViolation(HochschildError):
    """Structure constants fail associativity; carries the offending triple."""

    def __init__(self, triple, message=None):
        self.triple = triple
        super().__init__(message or f"associativity fails at basis triple {triple}")


class UnitViolation(HochschildError):
    """Unit laws fail; carries the offending basis element."""

    def __init__(self, element, message=None):
        self.element = element
        super().__init__(message or f"unit law fails at basis element {element}")


class TruncationTooSmall(HochschildError):
    """A quiver relation mixes terms inside and outside the truncation window."""


class BadParameter(HochschildError):
    """A catalog constructor received an invalid parameter."""


class DegreeUnderflow(HochschildError):
    """A brace operation would produce a cochain of negative degree."""


class WrongParity(HochschildError):
    """An operation restricted to one cochain-degree parity got the other one."""


class ParityViolation(WrongParity):
    """Parity precondition of an identity check failed."""


class EvenCharacteristic(HochschildError):
    """An odd-characteristic operation was requested over F_2."""


class EmptySubset(HochschildError):
    """Restriction to an empty object set was requested."""


class ResourceBound(HochschildError):
    """A computation would exceed the configured size cap."""


class NotASubalgebra(HochschildError):
    """A subspace is not closed under bracket and p-power."""


class IncoherentPMap(HochschildError):
    """A p-power computed in the enveloping algebra left the Lie part."""


class RewriteDivergence(HochschildError):
    """PBW rewriting exceeded its step bound (corrupted input data)."""


class NoConsistentConvention(HochschildError):
    """No sign convention satisfies the identity families (brace-level bug)."""


class AmbiguousConvention(HochschildError):
    """Several sign conventions survive; the random sample is too small."""


class InputFormatError(HochschildError):
    """An input document is malformed; carries the offending field."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
