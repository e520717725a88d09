"""Exception hierarchy. Every error carries a stable ``code`` used by the CLI."""


class CastelboundError(Exception):
    code = "error"


class DomainError(CastelboundError):
    """Input is well-formed but outside the domain of an operation."""

    code = "domain_error"


class MixedRadicals(DomainError):
    code = "mixed_radicals"


class DegenerateClass(DomainError):
    code = "degenerate_class"


class NotASemicircle(DomainError):
    code = "not_a_semicircle"


class UnknownCh3(DomainError):
    code = "unknown_ch3"


class KOutOfRange(DomainError):
    code = "k_out_of_range"


class MissingTable(DomainError):
    code = "missing_table"


class IncompleteMap(DomainError):
    code = "incomplete_map"


class PreconditionViolated(DomainError):
    code = "precondition_violated"


class TooLarge(DomainError):
    code = "too_large"


class OutOfCertifiedRange(DomainError):
    code = "out_of_certified_range"


class MissingAxiom(DomainError):
    code = "missing_axiom"


class InconsistentSeries(DomainError):
    code = "inconsistent_series"


class WindowTooNarrow(InconsistentSeries):
    code = "window_too_narrow"


class ConfigError(CastelboundError):
    """Malformed target config or rule script."""

    code = "config_error"
