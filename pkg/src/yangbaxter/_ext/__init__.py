"""Compiled kernels (built from ``_kernels.pyx`` when Cython is available)."""
