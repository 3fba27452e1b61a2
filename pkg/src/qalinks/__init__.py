"""Exact link-diagram invariants, quasi-alternating certification, and
Montesinos strong-quasipositivity classifiers."""

__version__ = "0.1.0"
