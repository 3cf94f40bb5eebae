"""
fockflow

Holomorphic Fock-Bargmann wave functions as planar potential flows: state
evaluation, vortex/source complex potentials, method-of-images systems for
wedge, strip and oblique-strip domains, q-geometric image sets and a numerical
identity verification battery.
"""

__version__ = "0.1.0"
__author__ = "fockflow developers"
__description__ = "Fock-Bargmann wave functions as planar potential flows"
