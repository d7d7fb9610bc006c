"""Exact computation of congruence covers of Bianchi orbifolds and
certified recognition of principal congruence link complements."""

__version__ = "0.1.0"
