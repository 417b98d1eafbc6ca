"""Exact construction and verification of complete mutually unbiased basis sets.

In any prime power dimension N = p^m the package builds all N+1 bases
from finite field arithmetic and the shift/clock operator group, keeps
every amplitude as an exact root-of-unity exponent, and verifies the
defining identities with integer arithmetic rather than tolerances.
"""

from .gf import GaloisField, build_field
from .mub import mub_family, mub_state, verify_eigenstates, verify_unbiasedness
from .pauli import u_op, v_op
from .tomo import mub_probabilities, mub_reconstruct, random_density

__version__ = "0.1.0"

__all__ = [
    "GaloisField",
    "build_field",
    "mub_family",
    "mub_state",
    "verify_eigenstates",
    "verify_unbiasedness",
    "u_op",
    "v_op",
    "mub_probabilities",
    "mub_reconstruct",
    "random_density",
    "__version__",
]
