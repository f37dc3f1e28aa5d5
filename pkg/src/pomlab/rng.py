"""Counter-based random streams.

Every stochastic operation derives an independent Philox stream from an
explicit 64-bit seed plus a (purpose, index) pair, so results never depend on
evaluation order or thread count.
"""

import numpy as np
from numpy.random import Generator, Philox

from .errors import InvalidArgument

PURPOSE_COUNTS = 1
PURPOSE_TOMOGRAPHY = 2
PURPOSE_NOISE = 3
PURPOSE_BOOTSTRAP = 4
PURPOSE_OPTIMIZER = 5

_INDEX_BITS = 48


def check_seed(seed: int) -> int:
    if not isinstance(seed, (int, np.integer)) or not 0 <= seed < 2**64:
        raise InvalidArgument(f"seed must be an integer in [0, 2**64), got {seed!r}")
    return int(seed)


def stream(seed: int, purpose: int, index: int = 0) -> Generator:
    """Independent generator keyed by (seed, purpose, index)."""
    check_seed(seed)
    if not 0 <= index < 2**_INDEX_BITS:
        raise InvalidArgument(f"stream index out of range: {index!r}")
    salt = np.uint64(purpose) << np.uint64(_INDEX_BITS) | np.uint64(index)
    return Generator(Philox(key=np.array([seed, salt], dtype=np.uint64)))
