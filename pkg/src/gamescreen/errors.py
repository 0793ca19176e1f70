"""Error types shared across the screening pipeline."""


class ScreeningError(Exception):
    """Base class for pipeline errors."""


class SchemaError(ScreeningError):
    """A wire-format document failed validation."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


class InsufficientDataError(ScreeningError):
    """A record is too short for the requested computation."""


class IncompleteSessionError(ScreeningError):
    """A session is missing one or more required game stages."""


class CannotAugmentError(ScreeningError):
    """The minority class is too small to recombine (fewer than 3 records)."""


class AugmentationStalledError(ScreeningError):
    """Augmentation exceeded its attempt budget without producing enough records."""


class ModelFormatError(ScreeningError):
    """A persisted model or calibration document is malformed or unsupported."""


class ServiceNotReadyError(ScreeningError):
    """The screening service has no active model or calibration loaded."""


class SessionConflictError(ScreeningError):
    """A session id was re-submitted with a different document."""
