"""Simulation and analysis toolkit for spectator-qubit feed-forward correction."""
__version__ = "0.1.0"
