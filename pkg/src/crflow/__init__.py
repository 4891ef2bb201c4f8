"""Effective Hamiltonians, gate parameters and collision maps for cross-resonance gates."""

__version__ = "0.1.0"
