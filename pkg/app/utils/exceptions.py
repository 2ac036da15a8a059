"""
Exception hierarchy shared by the numerical core, the data layer and the command surface.
Controllers map each family onto an exit code (see app.utils.exit_codes).
"""

class CagError(Exception):
    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

class ShapeMismatchError(CagError):
    pass

class InvalidArgumentError(CagError):
    pass

class NonScalarLossError(CagError):
    pass

class NonDeterministicFunctionError(CagError):
    pass

class SkeletonError(CagError):
    pass

class SequenceFormatError(CagError):
    pass

class InsufficientDataError(CagError):
    pass

class NonFiniteLossError(CagError):
    def __init__(self, message: str, part: str):
        super().__init__(message)
        self.part = part

class ConfigError(CagError):
    pass

class CheckpointVersionError(CagError):
    pass

class CheckpointConfigMismatchError(CagError):
    pass
