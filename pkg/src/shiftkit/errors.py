"""Exception hierarchy.

Errors fall into two families so that the command line front-end can map
them onto exit codes: ``InputError`` (bad input or file content, exit 2) and
``NumericalError`` (a computation could not be carried out reliably, exit 3).
"""

from __future__ import annotations


class ShiftkitError(Exception):
    """Base class for all library errors."""


class InputError(ShiftkitError, ValueError):
    """Invalid arguments, malformed files or unsupported requests."""


class NumericalError(ShiftkitError, ArithmeticError):
    """A numerical step failed (singular system, bad conditioning, ...)."""


# --- core numerics ---

class NonHermitian(InputError):
    pass


class NonSquare(InputError):
    pass


class Singular(NumericalError):
    pass


class IllConditioned(NumericalError):
    pass


class IllConditionedWarning(RuntimeWarning):
    pass


# --- circuits and spectra ---

class DimensionMismatch(InputError):
    pass


class IndexOutOfRange(InputError, IndexError):
    pass


class UnusedParameter(InputError):
    pass


class NoncommutingRepeatedGates(InputError):
    pass


class StochasticOnly(InputError):
    """The parameter drives a gate exp(i(xG+F)) that has no finite spectrum."""


class EmptySpectrum(InputError):
    pass


class CircuitFormatError(InputError):
    pass


# --- reconstruction and rules ---

class InvalidKind(InputError):
    pass


class InvalidR(InputError):
    pass


class ShiftCountMismatch(InputError):
    pass


class MissingFTerm(InputError):
    pass


# --- derivatives, resources, optimizers, graphs ---

class NoncommutingBlock(InputError):
    pass


class MissingField(InputError):
    pass


class Unsupported(InputError):
    pass


class VariantRequiresSingleFrequency(InputError):
    pass


class NonConvergence(NumericalError):
    pass


class EmptyGraph(InputError):
    pass


class InvalidGraph(InputError):
    pass


class ReconstructionMismatch(NumericalError):
    """Probe points disagree with a reconstruction (frequency count too small)."""
