"""Maximal-area surface group representations and their hyperelliptic fibrations."""

__version__ = "0.1.0"
