"""taumod: exact semilinear algebra over function fields in char p.

Isocrystals over K((z)) with their slope theory, twisted polynomial and
Laurent series rings, scalar semilinear solvers with replayable
certificates, Drinfeld-module reduction criteria, slope-0 Tate functors,
and Weil-action valuations. See README.md for the CLI.
"""

__version__ = "0.1.0"

from taumod.basefield import FieldDescriptor

__all__ = ["FieldDescriptor", "__version__"]
