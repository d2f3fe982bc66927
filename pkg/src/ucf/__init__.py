"""Union-closed set family toolkit.

Bitset-encoded families, closure operators, lattice views, exact density
certificates, and exhaustive desk-scale scans, with a compiled kernel core
and a pure-Python fallback selected at import (see ucf.kernels.BACKEND).
"""

__version__ = "0.1.0"
