"""Exception hierarchy shared by all squeezecert modules."""

from __future__ import annotations


class SqueezeCertError(Exception):
    """Base class for every error raised by this package."""


class ParseError(SqueezeCertError):
    """Malformed rational text, unknown family tag, or bad CLI input."""


class DomainError(SqueezeCertError):
    """Abscissa outside the certified domain (0, pi/2 lower bound)."""


class ResourceCapError(SqueezeCertError):
    """A configured table or index cap was exceeded."""


class ConvergenceError(SqueezeCertError):
    """The requested enclosure width is unreachable within the depth cap."""


class CertificationError(SqueezeCertError):
    """A certification step failed (precondition, witness search, refinement)."""


class IndeterminateSignError(CertificationError):
    """A sign could not be certified at maximum escalation depth.

    Carries the evaluation point and the best bracket reached so far, so
    callers can report partial progress instead of discarding it.
    """

    def __init__(self, message, *, point=None, derivative_order=None,
                 enclosure=None, best_bracket=None):
        super().__init__(message)
        self.point = point
        self.derivative_order = derivative_order
        self.enclosure = enclosure
        self.best_bracket = best_bracket
