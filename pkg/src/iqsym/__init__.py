"""Exact symbolic engine for a quasi-split affine quantum symmetric pair."""

__version__ = "0.1.0"
