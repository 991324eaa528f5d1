"""Exact workbench for Cops and Robbers: cop number, independence and
domination numbers, diameter-layer cop strategies and bound verification."""

__version__ = "0.1.0"
