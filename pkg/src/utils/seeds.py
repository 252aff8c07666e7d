"""
Seed derivation for parallel-safe experiments
"""

import hashlib


def derive_seed(base_seed: int, *parts) -> int:
    """
    Derive a 63-bit seed from a base seed and any number of labels.

    The result depends only on the arguments, never on scheduling, so cells
    of an experiment can run in any order or thread and still agree.
    """
    key = "|".join(str(p) for p in (base_seed, *parts)).encode("utf-8")
    digest = hashlib.blake2b(key, digest_size=8).digest()
    return int.from_bytes(digest, "big") >> 1
