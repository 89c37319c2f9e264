#!/usr/bin/env python3
"""
Merkle Puzzles Sim - run from a checkout without installing
"""

from merkle_puzzles_sim.app import main

if __name__ == "__main__":
    main()
