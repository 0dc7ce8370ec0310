"""Pointwise maximal leakage toolkit.

Thin wrapper over the C++ core. Distributions are sequences of
probabilities, mechanisms nested sequences (rows = secrets); every
leakage value is in nats.
"""

from ._pml import *  # noqa: F401,F403
from ._pml import __doc__ as _core_doc  # noqa: F401
