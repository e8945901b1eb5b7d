"""Toolkit for geometry-intersection and checkmate-in-one reasoning tasks.

Provides exact generators and oracles for both tasks, SVG sketch-chain
emitters with a deterministic rasterizer, and dataset/scoring harnesses.
"""

__version__ = "0.1.0"
