"""Deterministic seed derivation.

All randomness in the pipeline flows from one base seed. Sub-stages get
independent streams by hashing the base seed together with a stage name
(SHA-256, first 8 bytes, sign bit cleared), so any stage can be re-run in
isolation and reproduce its exact output.
"""

from __future__ import annotations

import hashlib


def derive_seed(base_seed: int, *stage: object) -> int:
    """Derive a 63-bit seed for a named sub-stage of a run."""
    key = "|".join([str(base_seed), *(str(s) for s in stage)])
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1
