"""
Monte Carlo simulation workers
"""
