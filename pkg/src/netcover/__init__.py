"""Continuous set covering on networks: preprocessing, cover sets, MILP models."""

__version__ = "0.1.0"
