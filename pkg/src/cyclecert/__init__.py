"""Certified limit-cycle bounds for planar polynomial systems.

Exact rational algebra produces machine-checkable certificates bounding the
number of limit cycles of ``x' = P(x,y), y' = Q(x,y)``; a floating-point
probe cross-validates each certificate against the actual phase portrait.
"""

__version__ = "0.1.0"
