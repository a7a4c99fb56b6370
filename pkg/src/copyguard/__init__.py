"""Manipulation-resistant copy-trading analytics for bonding-curve markets."""

__version__ = "0.1.0"
