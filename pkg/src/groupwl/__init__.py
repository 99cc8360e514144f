"""Weisfeiler-Leman refinement, pebble games and Spoiler strategies for finite groups."""

__version__ = "0.1.0"
