"""Fact-vs-myth statement classification with classical text models."""

__version__ = "0.1.0"
