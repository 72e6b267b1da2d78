"""Recursive function-field towers over small finite fields: exhaustive point
enumeration, exact ramification/bound calculus and the Drinfeld-module side."""

__version__ = "0.1.0"
