"""Fidelity lower bounds for stabilizer codes over memoryless channels, with an exact simulator to check them."""

__version__ = "0.1.0"
