"""Computation on a qubit chain driven only by global, translation-invariant operations.

Modules: ``symplectic`` (Pauli propagation), ``statevec`` (dense simulator),
``compiler`` (logical gates to pulse schedules), ``readout`` (total-spin
readout and chain-length detection), ``cli``.
"""

__version__ = "0.1.0"
