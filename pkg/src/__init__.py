"""Proximate growth toolkit - proximate growth functions relative to model growth functions."""

__version__ = "0.3.0"
