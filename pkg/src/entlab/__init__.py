"""Monte Carlo statistics of entanglement changes under the Hadamard-CNOT circuit."""

from .errors import NumericError, UsageError

__version__ = "0.1.0"

__all__ = ["NumericError", "UsageError", "__version__"]
