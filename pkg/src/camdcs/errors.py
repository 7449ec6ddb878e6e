"""Exception hierarchy.

Validation-type errors (bad input files, bad configuration) map to CLI exit
code 2; numerical failures (ill-conditioned fits, non-convergent root finding,
non-decaying integrands) map to exit code 3.
"""


class CamdcsError(Exception):
    """Base class for all package errors."""


class ValidationError(CamdcsError):
    """An input value violates a documented invariant."""


class ParseError(ValidationError):
    """A file could not be parsed; the message names the offending line."""


class ConfigError(ValidationError):
    """A mandatory configuration key is missing or malformed."""


class SelectionError(ValidationError):
    """A requested pole does not match any windowed candidate."""

    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = tuple(candidates)


class NoCandidatesError(SelectionError):
    """The first-energy pole list is empty; no trajectory can be seeded."""


class NumericalError(CamdcsError):
    """A numerical procedure failed or refused to proceed."""


class ConditioningError(NumericalError):
    """The interpolation system is numerically singular in double precision."""


class RootFindingError(NumericalError):
    """Polynomial root extraction did not converge."""


class ProximityError(NumericalError):
    """Evaluation was requested within tolerance of a pole."""


class SingularityError(NumericalError):
    """A matching determinant or real-axis pole prevents evaluation."""


class EndpointError(NumericalError):
    """The operation is undefined at theta = 0 or theta = pi."""


class DecayError(NumericalError):
    """The reconstructed |S| does not decay along the real axis."""


class DegeneracyError(NumericalError):
    """Two poles are too close for a simple-pole residue."""


class ResonanceDenominatorError(NumericalError):
    """1 + exp(+-2*pi*i*lambda) vanishes: pole at half-odd-integer real J."""


class RunError(CamdcsError):
    """No energy in the requested window could be processed."""
