"""
Merkle Puzzles Sim - one-round key agreement in the random-permutation-oracle model
"""

__version__ = "0.1.0"
