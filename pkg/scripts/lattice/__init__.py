"""
LDPC lattices: construction, exact geometry and file I/O
"""
