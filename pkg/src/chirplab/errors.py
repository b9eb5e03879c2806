"""Exception hierarchy shared by every module.

Numerical failures derive from :class:`NumericalError`; the CLI maps them to
exit code 1 (verification failures such as rank loss) or 3 (infeasible
resolution or tolerance) via the ``exit_code`` attribute.
"""


class ChirpLabError(Exception):
    exit_code = 1


class ConfigError(ChirpLabError):
    exit_code = 2


class NumericalError(ChirpLabError):
    exit_code = 1


class RankDeficient(NumericalError):
    pass


class DegenerateMixed(NumericalError):
    pass


class DegenerateQuadratic(NumericalError):
    pass


class GenericityFailure(NumericalError):
    pass


class OriginNotInterior(NumericalError):
    pass


class Unbounded(NumericalError):
    pass


class GridTooCoarse(NumericalError):
    exit_code = 3


class ResolutionTooCoarse(NumericalError):
    exit_code = 3


class ToleranceNotMet(NumericalError):
    exit_code = 3


class InsufficientPoints(NumericalError):
    pass


class NonPositiveValues(NumericalError):
    pass
