"""Small helpers for cyclic sequences (rotations are cyclic, not linear)."""

from __future__ import annotations

from collections.abc import Sequence


def rotate_to(seq: Sequence, start_index: int) -> tuple:
    """Return seq as a tuple starting at start_index."""
    return tuple(seq[start_index:]) + tuple(seq[:start_index])


def rotate_to_least(seq: Sequence) -> tuple:
    """Canonical linearization: start the cycle at its least element."""
    if not seq:
        return ()
    return rotate_to(seq, seq.index(min(seq)))


def cyclic_equal(a: Sequence, b: Sequence) -> bool:
    """True if a and b are the same cyclic sequence (same direction)."""
    if len(a) != len(b):
        return False
    if not a:
        return True
    ta, tb = tuple(a), tuple(b)
    return any(rotate_to(tb, i) == ta for i in range(len(tb)))


def cyclic_equal_up_to_reversal(a: Sequence, b: Sequence) -> bool:
    """True if a equals b or reversed(b) as cyclic sequences."""
    return cyclic_equal(a, b) or cyclic_equal(a, tuple(reversed(tuple(b))))
