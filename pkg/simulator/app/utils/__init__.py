"""
Utility functions: linear algebra helpers, time grids, CSV and text formatting
"""
