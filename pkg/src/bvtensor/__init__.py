"""Symmetric sequences, monoidal products, divided powers and the Boardman-Vogt tensor of operads."""

__version__ = "0.1.0"
