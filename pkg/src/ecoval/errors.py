"""Exception hierarchy shared by every stage."""


class EcovalError(Exception):
    """Base class for all errors raised by ecoval."""


class DomainError(EcovalError, ValueError):
    """An operation was called outside its mathematical domain."""


class DegenerateWeightsError(DomainError):
    """Every indicator carries zero information, so no weights exist."""


class TrainingError(EcovalError, RuntimeError):
    """LSTM training diverged."""

    def __init__(self, message, epoch=None):
        super().__init__(message)
        self.epoch = epoch


class ScenarioParseError(EcovalError):
    """The scenario document could not be read as structured text."""


class SchemaError(EcovalError):
    """The scenario document is readable but does not match the schema."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class StageError(EcovalError):
    """A pipeline stage failed; carries the stage name for diagnostics."""

    def __init__(self, stage, message):
        self.stage = stage
        super().__init__(f"{stage}: {message}")


class ProbeError(EcovalError):
    """The model failed at a sensitivity probe point."""

    def __init__(self, probe, point, cause):
        self.probe = probe
        self.point = list(point)
        super().__init__(f"probe {probe} at {self.point}: {cause}")
