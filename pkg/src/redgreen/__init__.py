"""Red/green (Z/X) spider calculus on qubits and three-qubit entanglement analysis."""

from redgreen.phase import Color, Phase
from redgreen.qtensor import QTensor

__all__ = ["Color", "Phase", "QTensor"]
__version__ = "0.1.0"
