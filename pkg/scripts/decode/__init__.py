"""
Iterative and exhaustive decoders for 1-level LDPC lattices
"""
