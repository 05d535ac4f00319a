"""Compile gate-model circuits into measurement patterns for photonic one-way machines."""

__version__ = "0.1.0"
