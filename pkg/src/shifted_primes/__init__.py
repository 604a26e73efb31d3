"""Exact computation of N(x, y), the count of n <= x divisible by p - 1 for a prime p > y."""

__version__ = "0.1.0"
