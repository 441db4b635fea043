"""
Errors

Every failure the toolkit raises on purpose derives from FadingLimitsError
and carries the process exit code the CLI reports for it:

- 1: usage / domain errors (bad input)
- 2: numerical failures (solver could not converge, lost mass too large)
- 3: Monte Carlo disagreed with an analytic or convolution reference
"""

from __future__ import annotations
from typing import Optional


class FadingLimitsError(Exception):
    """Base error with an exit code and a human-readable detail."""

    exit_code: int = 1

    def __init__(self, detail: str, exit_code: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code

    def __str__(self) -> str:
        return self.detail


class UsageError(FadingLimitsError):
    """Invalid command-line usage or parameter combination."""
    exit_code = 1


class DomainError(FadingLimitsError, ValueError):
    """An argument lies outside the domain of the operation."""
    exit_code = 1


class UnsupportedOperationError(FadingLimitsError, NotImplementedError):
    """The operation is not defined for this distribution kind."""
    exit_code = 1


class NumericalError(FadingLimitsError):
    """A numerical routine failed (bracketing, convergence, lost mass)."""
    exit_code = 2


class OracleDisagreementError(FadingLimitsError):
    """Monte Carlo and a deterministic reference disagree beyond tolerance."""
    exit_code = 3
