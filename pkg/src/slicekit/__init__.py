"""slicekit: exact slicing, projecting, and integrating machinery for convex
polytopes, with symbolic per-chamber formulas and search over chamber
structures."""

__version__ = "0.1.0"
