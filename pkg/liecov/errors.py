"""Exception hierarchy shared by every liecov module.

Each error carries the process exit code the command-line front end reports
for it, plus an optional ``details`` mapping that ends up in JSON error
reports.
"""


class LiecovError(Exception):
    """Base class for all toolkit errors"""

    exit_code = 1

    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self):
        """Serializable error report"""
        return {
            'error': type(self).__name__,
            'message': self.message,
            'exit_code': self.exit_code,
            'details': {k: str(v) for k, v in self.details.items()},
        }


class InvalidInput(LiecovError):
    """Malformed input file, flag or argument"""


class DimensionMismatch(LiecovError):
    """Operands live in spaces of different dimension"""


class InvalidAlgebra(LiecovError):
    """Structure constants fail antisymmetry, Jacobi or non-degeneracy"""


class NotSplit(LiecovError):
    """Cartan matrices are not simultaneously diagonalizable over Q"""


class SamplingExhausted(LiecovError):
    """No regular element found within the retry budget"""


class NotRegular(LiecovError):
    """An operation requiring a regular element received a singular one"""


class DegreeBoundExceeded(LiecovError):
    """A degree-wise search ended before finding what it needed"""

    exit_code = 2


class RankMismatch(LiecovError):
    """More module generators than the zero-weight multiplicity allows"""

    exit_code = 2


class NotCovariant(LiecovError):
    """A map or distribution has a nonzero equivariance defect"""

    exit_code = 3


class NotInModule(LiecovError):
    """A covariant map could not be expressed over the module basis"""

    exit_code = 3


class NotPointwiseFixed(LiecovError):
    """A sample vector is not fixed by the centralizer action"""

    exit_code = 3


class NotTangent(LiecovError):
    """A vector field has a nonzero tangency defect"""

    exit_code = 4


class RetryBudgetExhausted(LiecovError):
    """Randomized Hilbert 90 construction failed too many times"""

    exit_code = 5


class NotExpressible(LiecovError):
    """sigma(Q_j) is not expressible over the given family"""

    exit_code = 5


class ConsistencyFailure(LiecovError):
    """An identity that must hold exactly failed (corrupted input)"""

    exit_code = 5


class NoFactorization(LiecovError):
    """No factorization of a covariant distribution was found"""

    exit_code = 6
