"""Kernel lane selection.

TAUMOD_PURE=1 forces the pure lane; otherwise the compiled extension is
used when importable. `BACKEND` reports which lane is live so the bench
and the CLI version string can show it.
"""

import os

if os.environ.get("TAUMOD_PURE") == "1":
    from taumod import _kernels_py as _impl
else:
    try:
        from taumod import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from taumod import _kernels_py as _impl

BACKEND = _impl.BACKEND
polymulmod = _impl.polymulmod
polypowmod = _impl.polypowmod
rref_mod_p = _impl.rref_mod_p
nullspace_mod_p = _impl.nullspace_mod_p
solve_mod_p = _impl.solve_mod_p
