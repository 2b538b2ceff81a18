"""Exception types. ``code`` is the CLI exit status for each category."""


class QPDError(Exception):
    category = "error"
    code = 1


class ConfigError(QPDError):
    category = "config"
    code = 2


class ConditioningError(QPDError):
    """A fractional kernel power would amplify some mode beyond the bound."""
    category = "conditioning"
    code = 3


class CutoffError(QPDError):
    """Fock truncation or dual Fourier grid too small for the requested field."""
    category = "cutoff"
    code = 4


class SingularPError(QPDError):
    category = "singular_p"
    code = 5


class IntegrationError(QPDError):
    """Step-size or positivity violation while integrating dynamics."""
    category = "integration"
    code = 6


class AxiomViolation(QPDError):
    category = "axiom"
    code = 7


class SingularPWarning(UserWarning):
    """Band-limited Glauber-Sudarshan field still carries weight near the cutoff."""


class TruncationWarning(UserWarning):
    pass
