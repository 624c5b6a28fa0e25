"""Exception hierarchy shared across the toolkit."""


class SpliceError(Exception):
    """Base class for all domain errors."""


class DocumentError(SpliceError):
    """A JSON document does not match its schema."""


class GenerationExhausted(SpliceError):
    """The random generator hit its retry cap (or the shape is impossible)."""


class ConditionViolation(SpliceError):
    """A diagram fails the edge determinant or semigroup condition."""


class HammViolation(SpliceError):
    """A coefficient matrix has a vanishing maximal minor."""


class TailViolation(SpliceError):
    """A tail term does not sit strictly above the admissible weights."""


class NonIntegralMultiplicity(SpliceError):
    """A tropical multiplicity formula produced a non-exact division."""


class InconsistentMembership(SpliceError):
    """locate and certificate_search both succeeded, or both failed."""


class EliminationDegenerate(SpliceError):
    """Binomial elimination produced a vanishing constant."""


class SolveFailed(SpliceError):
    """A numeric or integral solve did not produce a usable solution."""


class NoTorusPoint(SpliceError):
    """Sampling the initial degeneration found no point in the torus."""


class NonCoprimeFan(SpliceError):
    """Recovery refused a fan carrying a multiplicity different from one."""


class NotRealizable(SpliceError):
    """No splice diagram reproduces the given data."""


class VerificationFailed(SpliceError):
    """A reconstructed object failed its round-trip check."""
