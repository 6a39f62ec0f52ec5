"""Exception hierarchy shared by all sftkit modules."""


class SFTError(Exception):
    """Base class for every error raised by sftkit."""


class StructuralError(SFTError):
    """Unknown variables, conflicting tables or mismatched interfaces."""


class GradingError(SFTError):
    """Parity or degree mismatch."""


class LevelError(SFTError):
    """An operation was applied at the wrong algebra level (e.g. hbar in a Poisson bracket)."""


class DivergenceError(SFTError):
    """A formal expansion does not terminate under the active truncation policy."""


class ConfigurationError(SFTError):
    """Required configuration data is missing."""


class FiltrationError(SFTError):
    """A boundary map increases the declared weight."""


class SoundnessError(SFTError):
    """An identity that must hold exactly was violated; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class RangeError(SFTError):
    """Arguments outside the supported range."""


class ValidationError(SFTError):
    """Input data violates a documented constraint."""
