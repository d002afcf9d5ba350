"""Guess-the-larger-number games: strategies, exact values, Monte Carlo."""

__version__ = "0.1.0"
