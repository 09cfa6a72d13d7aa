"""Inactivity cascade analysis of temporal interaction networks."""

__version__ = "0.1.0"
