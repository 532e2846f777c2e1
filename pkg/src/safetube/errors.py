"""Exception types shared across the package.

The CLI maps these onto exit codes: parse/integrity/labeling problems are
data errors (exit 3), configuration/parameter/schema problems are usage of
bad values (exit 4), anything else is internal (exit 5).
"""


class SafeTubeError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(SafeTubeError):
    """A file could not be parsed; the message carries a line/record locator."""


class IntegrityError(SafeTubeError):
    """Corpus data violates an invariant (duplicate key, dangling reference)."""


class LabelingError(SafeTubeError):
    """A graph build needs a safety label or verdict that is missing."""


class ExtractionError(SafeTubeError):
    """Feature extraction failed for a video (e.g. unresolvable uploader)."""


class ConfigurationError(SafeTubeError):
    """A configuration value or file is unusable (e.g. empty bad-word list)."""


class ParameterError(SafeTubeError, ValueError):
    """A numeric argument violates an operation's precondition."""


class SchemaError(SafeTubeError):
    """A model does not match the feature schema it is applied to."""


class CoverageError(SafeTubeError):
    """A partition does not cover every node of the graph being scored."""


DATA_ERRORS = (ParseError, IntegrityError, LabelingError, ExtractionError)
PARAMETER_ERRORS = (ConfigurationError, ParameterError, SchemaError, CoverageError)
