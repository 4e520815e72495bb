"""Exact and jet-numeric kernel for metric and generalized Kaehler reduction."""

__version__ = "0.1.0"
