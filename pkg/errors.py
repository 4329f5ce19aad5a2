"""Exception hierarchy shared by every module.

Library code raises; only ``cli.py`` and ``api.py`` turn these into exit codes
or HTTP statuses.
"""


class ParaCohError(Exception):
    """Base class for all engine errors."""


class InputError(ParaCohError):
    """Bad user input: CLI exit 2, HTTP 400."""


class ParseError(InputError):
    def __init__(self, position, message):
        self.position = position
        self.message = message
        super().__init__(f"parse error at position {position}: {message}")


class IndexPairError(ParseError):
    """A digit pair 'jk' with j >= k or an index outside 1..n."""


class JacobiError(InputError):
    def __init__(self, k):
        self.k = k
        super().__init__(f"Jacobi identity fails: d(d e^{k}) != 0")


class DimensionMismatch(InputError):
    pass


class AmbientMismatch(InputError):
    pass


class NotInvolution(InputError):
    pass


class EigenspaceImbalance(InputError):
    pass


class InvolutionFailsInField(InputError):
    def __init__(self, entry):
        self.entry = entry
        super().__init__(f"K_t^2 - I is nonzero at entry {entry}")


class NotIntegrable(InputError):
    pass


class NotClosed(InputError):
    pass


class NotHomogeneous(InputError):
    pass


class UnknownEntry(InputError):
    pass


class PoleError(InputError):
    def __init__(self, t0):
        self.t0 = t0
        super().__init__(f"pole at t = {t0}")


class ZeroPolynomial(InputError):
    pass


class InclusionViolated(ParaCohError):
    pass


class NotFound(ParaCohError):
    pass


class InternalInvariantError(ParaCohError):
    """Two independent computations disagree: CLI exit 3."""


class CounterexampleFound(ParaCohError):
    def __init__(self, certificate):
        self.certificate = certificate
        super().__init__(f"counterexample: {certificate}")
