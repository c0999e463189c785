"""Fractional Zener and multiple-relaxation acoustic loss models."""

__version__ = "0.1.0"
