"""Numerical core: states, flows, image systems, q-calculus and analysis."""
