"""Counting and verification toolkit for 4-cycle-free induced subgraphs of grid graphs."""
__version__ = "0.1.0"
