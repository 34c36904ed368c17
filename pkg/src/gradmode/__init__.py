"""Guided modes of graded planar waveguides."""
__version__ = "0.1.0"
