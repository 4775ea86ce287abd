"""
Command-line surface of the LDPC lattice workbench
"""
