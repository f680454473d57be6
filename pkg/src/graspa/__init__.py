"""Scoring engine for the GRASPA grasping benchmark."""

__version__ = "0.1.0"
