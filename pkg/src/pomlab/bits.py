"""Bit-string and parity-mask utilities.

Bit strings are plain integers with bit 1 stored in the least significant
position, so the integer read LSB-first matches the serialized rendering
"x1x2...xn".  Enumeration-based operations are capped at N_MAX bits because
they materialize 2**n tables.
"""

import numpy as np

from .errors import InvalidArgument, InvalidMask

N_MAX = 16


def check_n(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= N_MAX:
        raise InvalidArgument(f"bit count must be an integer in [1, {N_MAX}], got {n!r}")
    return int(n)


def bit(x: int, i: int) -> int:
    """Bit i of x, 1-indexed from the least significant position."""
    return (x >> (i - 1)) & 1


def parity(x: int, mask: int) -> int:
    """XOR of the bits of x selected by mask."""
    return (x & mask).bit_count() & 1


def parity_masks(n: int) -> list[int]:
    """All masks with at least two selected bits, in ascending order."""
    check_n(n)
    return [s for s in range(1, 2**n) if s.bit_count() >= 2]


def check_mask(mask: int, n: int) -> int:
    check_n(n)
    if not isinstance(mask, (int, np.integer)) or not 0 < mask < 2**n:
        raise InvalidMask(f"mask {mask!r} does not fit in {n} bits")
    if int(mask).bit_count() < 2:
        raise InvalidMask(f"mask {format_bits(mask, n)} selects fewer than two bits")
    return int(mask)


def format_bits(x: int, n: int) -> str:
    return "".join(str(bit(x, i)) for i in range(1, n + 1))


def parse_bits(text: str) -> tuple[int, int]:
    """Inverse of format_bits; returns (value, bit count)."""
    if not text or any(c not in "01" for c in text):
        raise InvalidArgument(f"not a bit string: {text!r}")
    x = sum(int(c) << i for i, c in enumerate(text))
    return x, len(text)


def bit_table(n: int) -> np.ndarray:
    """(2**n, n) array with entry [x, y-1] = bit y of x."""
    check_n(n)
    xs = np.arange(2**n)[:, None]
    return (xs >> np.arange(n)[None, :]) & 1


def xsign_table(n: int) -> np.ndarray:
    """(2**n, n) array of +1/-1 with +1 where bit y of x is 0."""
    return 1.0 - 2.0 * bit_table(n)


def mask_sign_table(n: int, masks: list[int]) -> np.ndarray:
    """(len(masks), 2**n) array of +1/-1 with +1 where x has even mask-parity."""
    check_n(n)
    out = np.empty((len(masks), 2**n))
    for j, s in enumerate(masks):
        for x in range(2**n):
            out[j, x] = 1.0 - 2.0 * parity(x, s)
    return out
