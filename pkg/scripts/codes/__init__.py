"""
Binary codes, nested chains and PEG/E-PEG Tanner-graph construction
"""
