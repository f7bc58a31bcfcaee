"""Exact symbolic toolkit for Fedosov-type resolutions and formality checks."""

__version__ = "0.1.0"
