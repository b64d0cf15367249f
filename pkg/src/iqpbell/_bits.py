"""Bit-string conventions.

Qubit ``m`` is bit ``m`` of an integer index (little-endian), and character
``m`` of a printed bit string.  So ``"10"`` on two qubits is index 1.
"""
from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from .errors import InputShapeError


def to_index(bits, n: int) -> int:
    """Convert an int, a '0'/'1' string or a bit sequence to an index."""
    if isinstance(bits, (int, np.integer)) and not isinstance(bits, bool):
        bits = int(bits)
        if not 0 <= bits < (1 << n):
            raise InputShapeError(f"index {bits} out of range for {n} bits")
        return bits
    if isinstance(bits, str):
        seq = [c for c in bits.strip()]
        if any(c not in "01" for c in seq):
            raise InputShapeError(f"bit string {bits!r} contains characters other than 0/1")
        seq = [int(c) for c in seq]
    else:
        seq = [int(b) for b in bits]
        if any(b not in (0, 1) for b in seq):
            raise InputShapeError(f"bit sequence {bits!r} contains values other than 0/1")
    if len(seq) != n:
        raise InputShapeError(f"expected {n} bits, got {len(seq)}")
    return sum(b << m for m, b in enumerate(seq))


def to_bits(index: int, n: int) -> tuple[int, ...]:
    return tuple((index >> m) & 1 for m in range(n))


def to_string(index: int, n: int) -> str:
    return "".join(str((index >> m) & 1) for m in range(n))


def as_mask(mask, n: int) -> int:
    """An int bitmask, or an iterable of qubit indices, as an int bitmask."""
    if isinstance(mask, (int, np.integer)) and not isinstance(mask, bool):
        mask = int(mask)
        if not 0 <= mask < (1 << n):
            raise InputShapeError(f"mask {mask:#b} does not fit in {n} bits")
        return mask
    if isinstance(mask, Iterable):
        out = 0
        for q in mask:
            q = int(q)
            if not 0 <= q < n:
                raise InputShapeError(f"qubit {q} out of range for {n} qubits")
            out |= 1 << q
        return out
    raise InputShapeError(f"cannot interpret {mask!r} as a qubit mask")


def mask_qubits(mask: int, n: int) -> tuple[int, ...]:
    return tuple(q for q in range(n) if (mask >> q) & 1)


def parity_signs(n: int, mask: int) -> np.ndarray:
    """(-1)^{popcount(z & mask)} for every z in ascending order."""
    signs = np.ones(1 << n, dtype=np.int8)
    idx = np.arange(1 << n)
    for q in range(n):
        if (mask >> q) & 1:
            signs[(idx >> q) & 1 == 1] *= -1
    return signs
