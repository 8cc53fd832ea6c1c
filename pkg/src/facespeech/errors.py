"""Exception taxonomy shared across the package.

The CLI maps these onto process exit codes: ConfigError -> 2, I/O failures
(OSError) -> 3, numerical faults (DivergenceError, TrainingFaultError) -> 4.
"""


class FacespeechError(Exception):
    """Base class for all package-specific errors."""


class ContractViolationError(FacespeechError):
    """An API precondition was violated by the caller."""


class InputError(FacespeechError):
    """Input data is malformed or out of the supported range."""


class EvaluationError(FacespeechError):
    """A function under test produced NaN or could not be evaluated."""


class SingularTimeError(FacespeechError):
    """Diffusion-time t=0 requested where the kernel is singular."""


class DivergenceError(FacespeechError):
    """NaN appeared during reverse sampling; carries the failing step index."""

    def __init__(self, step: int, message: str = ""):
        self.step = step
        super().__init__(message or f"non-finite state at reverse step {step}")


class InfeasibleAlignmentError(FacespeechError):
    """No monotonic surjective alignment exists (fewer frames than tokens)."""


class DegenerateTaskError(FacespeechError):
    """A training task is degenerate (e.g. contrastive corpus with one identity)."""


class ManifestParseError(FacespeechError):
    """A manifest line could not be parsed; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class TrainingFaultError(FacespeechError):
    """A loss component became non-finite; carries the component name."""

    def __init__(self, component: str, message: str = ""):
        self.component = component
        super().__init__(message or f"non-finite loss component: {component}")


class ConfigError(FacespeechError):
    """Run configuration failed validation."""
