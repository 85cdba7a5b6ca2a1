"""Seed derivation helpers.

Every stochastic step in the package owns a named substream derived from
a single master seed, so re-running any stage in isolation (or under a
different worker count) reproduces identical draws.
"""

from __future__ import annotations

import hashlib

_MASK64 = (1 << 64) - 1


def derive_seed(master: int, *parts) -> int:
    """Derive a 64-bit child seed from ``master`` and a label path.

    Stable across processes and platforms (sha256 of the rendered path),
    unlike ``hash()``. Parts may be ints or strings.
    """
    h = hashlib.sha256()
    h.update(str(int(master)).encode())
    for part in parts:
        h.update(b"/")
        h.update(str(part).encode())
    return int.from_bytes(h.digest()[:8], "little") & _MASK64
