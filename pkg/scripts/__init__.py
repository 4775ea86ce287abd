"""LDPC lattice workbench: codes, lattices, decoders and Monte Carlo simulation"""
