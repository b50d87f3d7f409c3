"""Counting parabolic structures on vector bundles over the projective line
over finite fields."""

__version__ = "0.1.0"
