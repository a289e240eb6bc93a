"""
s2shock: exceptions.py

Defines exception classes

License: MIT
"""

__all__ = ['make_exception', 'S2ShockError', 'ProfileDomainError', 'ContractViolation', 'UnsupportedOrderError',
           'ProjectionSingularError', 'DerivationMismatchError', 'InvalidAdiabaticIndexError',
           'SingularMatrixError', 'ConfigError', 'UsageError', 'PersistenceError', 'PoleSingularityError',
           'MarginError', 'OracleDomainError', 'RhsDegenerateError', 'PastBlowupError',
           'DiagnosticUndefinedError', 'VacuumError', 'NumericalFailureError']

_CODE_2_EXCEPTION = {}  # map error code to Exception class


def make_exception(code, message=None, details=None):
    """Return the S2ShockError instance registered for `code`.

    Used to rebuild errors persisted in sweep rows and run summaries.
    Unknown codes give a plain S2ShockError.
    """
    try:
        klass = _CODE_2_EXCEPTION[code]
        return klass(message, details)
    except KeyError:
        err = S2ShockError(message, details)
        err.code = code
        return err


class S2ShockError(Exception):
    """Base Exception class for s2shock."""

    code = 'error'
    message = 'Error'

    def __init__(self, message=None, details=None):
        """

        Parameters
        ----------
        message : str
            a general error message, defaults to the class message

        details : str
            optional additional information about the error
        """
        super(S2ShockError, self).__init__()
        if message is not None:
            self.message = message
        self.details = details

    def __str__(self):
        return 'S2Shock Error: code [%s], message [%s], details [%s]' % \
               (self.code, self.message, self.details)

    def __reduce__(self):
        return self.__class__, (self.message, self.details)


def _add_to_mapping(cls):
    """Decorator that register exceptions to _CODE_2_EXCEPTION mapping."""
    code = cls.__dict__.get('code')

    if code is not None:
        _CODE_2_EXCEPTION[code] = cls

    return cls


@_add_to_mapping
class ProfileDomainError(S2ShockError):
    """Fixed params: code -> profile-domain, message -> Profile input is not finite"""
    code = 'profile-domain'
    message = 'Profile input is not finite'


@_add_to_mapping
class ContractViolation(S2ShockError):
    """Fixed params: code -> contract, message -> Precondition violated"""
    code = 'contract'
    message = 'Precondition violated'


@_add_to_mapping
class UnsupportedOrderError(ContractViolation):
    """Fixed params: code -> unsupported-order, message -> Derivative order not supported"""
    code = 'unsupported-order'
    message = 'Derivative order not supported'


@_add_to_mapping
class ProjectionSingularError(S2ShockError):
    """Fixed params: code -> projection-singular, message -> Point too close to the north pole"""
    code = 'projection-singular'
    message = 'Point too close to the north pole'


@_add_to_mapping
class DerivationMismatchError(S2ShockError):
    """Fixed params: code -> derivation-mismatch, message -> Analytic and finite-difference values disagree"""
    code = 'derivation-mismatch'
    message = 'Analytic and finite-difference values disagree'


@_add_to_mapping
class InvalidAdiabaticIndexError(S2ShockError):
    """Fixed params: code -> invalid-gamma, message -> Adiabatic index must exceed 1"""
    code = 'invalid-gamma'
    message = 'Adiabatic index must exceed 1'


@_add_to_mapping
class SingularMatrixError(S2ShockError):
    """Fixed params: code -> singular-matrix, message -> Matrix is singular"""
    code = 'singular-matrix'
    message = 'Matrix is singular'


@_add_to_mapping
class ConfigError(S2ShockError):
    """Fixed params: code -> config, message -> Invalid configuration"""
    code = 'config'
    message = 'Invalid configuration'


@_add_to_mapping
class UsageError(S2ShockError):
    """Fixed params: code -> usage, message -> Invalid usage"""
    code = 'usage'
    message = 'Invalid usage'


@_add_to_mapping
class PersistenceError(S2ShockError):
    """Fixed params: code -> io, message -> Input/output failure"""
    code = 'io'
    message = 'Input/output failure'


@_add_to_mapping
class PoleSingularityError(S2ShockError):
    """Fixed params: code -> pole-singularity, message -> Grid reaches the pole margin"""
    code = 'pole-singularity'
    message = 'Grid reaches the pole margin'


@_add_to_mapping
class MarginError(S2ShockError):
    """Fixed params: code -> margin, message -> Point too close to the grid boundary"""
    code = 'margin'
    message = 'Point too close to the grid boundary'


@_add_to_mapping
class OracleDomainError(S2ShockError):
    """Fixed params: code -> oracle-domain, message -> Query past the characteristic crossing time"""
    code = 'oracle-domain'
    message = 'Query past the characteristic crossing time'


@_add_to_mapping
class RhsDegenerateError(S2ShockError):
    """Fixed params: code -> rhs-degenerate, message -> Third derivative at the origin is degenerate"""
    code = 'rhs-degenerate'
    message = 'Third derivative at the origin is degenerate'


@_add_to_mapping
class PastBlowupError(S2ShockError):
    """Fixed params: code -> past-blowup, message -> Time is past the predicted blow-up time"""
    code = 'past-blowup'
    message = 'Time is past the predicted blow-up time'


@_add_to_mapping
class DiagnosticUndefinedError(S2ShockError):
    """Fixed params: code -> diagnostic-undefined, message -> Not enough data for the diagnostic"""
    code = 'diagnostic-undefined'
    message = 'Not enough data for the diagnostic'


@_add_to_mapping
class VacuumError(S2ShockError):
    """Fixed params: code -> vacuum, message -> Sound speed reached zero"""
    code = 'vacuum'
    message = 'Sound speed reached zero'


@_add_to_mapping
class NumericalFailureError(S2ShockError):
    """Fixed params: code -> numerical-failure, message -> Non-finite values in the solution"""
    code = 'numerical-failure'
    message = 'Non-finite values in the solution'
