"""Exception hierarchy.

Everything raised deliberately by the library derives from ``DissintError``.
``ComputationError`` covers numerical failures (nodal points, degeneracy,
undersampling); the CLI maps those to exit code 3 and ``ConfigError`` to 2.
"""


class DissintError(Exception):
    """Base class for all library errors."""


class ConfigError(DissintError):
    """Invalid scenario configuration; ``path`` locates the offending field."""

    def __init__(self, path, message):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)


class ComputationError(DissintError, ArithmeticError):
    """A well-formed input hit a numerical singularity or tolerance failure."""


class DimensionMismatch(DissintError, ValueError):
    pass


class NonFiniteInput(DissintError, ValueError):
    pass


# algebra
class DegenerateSpectrum(ComputationError):
    pass


class NonDiagonalizable(ComputationError):
    pass


class PoleAtI(ComputationError):
    pass


class ZeroSample(ComputationError):
    pass


class UndersampledPath(ComputationError):
    def __init__(self, index, jump):
        self.index = index
        self.jump = jump
        super().__init__(f"phase jump {jump:.6g} rad between samples {index} and {index + 1}")


# biortho
class OrthogonalPair(ComputationError):
    pass


class BadWeights(DissintError, ValueError):
    pass


class NotBiorthonormal(ComputationError):
    pass


class ComplexWeights(ComputationError):
    pass


class NegativeWeight(ComputationError):
    pass


class BinormalizationBroken(ComputationError):
    pass


# propagator
class DefectExceeded(ComputationError):
    pass


# interferometer
class ZeroZ(ComputationError):
    pass


class VanishingInterference(ComputationError):
    pass


# geometric
class ZeroGauge(ComputationError):
    pass


class NodalPoint(ComputationError):
    pass


class NotCyclic(ComputationError):
    pass


# gate
class PoleCrossing(ComputationError):
    pass


class ExpansionSingular(ComputationError):
    pass


class InsufficientSignal(ComputationError):
    pass
