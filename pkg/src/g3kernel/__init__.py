"""Sequent calculi G3c/G3i/G3m with atomic rule extensions."""

__version__ = "0.1.0"
