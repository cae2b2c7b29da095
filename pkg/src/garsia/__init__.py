"""Certified entropy bounds for Bernoulli convolutions."""

__version__ = "0.1.0"
