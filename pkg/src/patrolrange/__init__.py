"""Exact solver, closed-form predictions and strategy checks for the fixed-patrol
cops-and-robbers game with a capture radius."""

__version__ = "0.1.0"
