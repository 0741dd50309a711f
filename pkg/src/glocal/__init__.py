"""Two qubits under mixed local/global thermal dissipation: dynamics, channels, entangling power."""

from .model import ModelParams

__all__ = ["ModelParams"]
__version__ = "0.1.0"
