# Merkle Puzzles Sim commands
