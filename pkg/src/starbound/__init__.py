"""Bound states of star-shaped tight-binding chains and discretized wires."""

__version__ = "0.1.0"
