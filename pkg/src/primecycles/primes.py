"""Prime membership, counting and indexing via a sieve of Eratosthenes.

Tables are immutable after construction and safe to share across threads.
Construction is segmented above ``SEGMENT_THRESHOLD`` so the only large
allocation is the membership array itself.  For prime sums far beyond what a
table should hold in memory, :func:`iter_prime_blocks` streams primes in
numpy blocks without materializing a table.
"""

import math

import numpy as np

from primecycles.errors import (
    InvalidArgumentError,
    OutOfRangeError,
    ResourceLimitError,
)

DEFAULT_MEMORY_CAP = 2**31
SEGMENT_THRESHOLD = 10_000_000
SEGMENT_SIZE = 1 << 24


def _simple_mask(limit: int) -> np.ndarray:
    """Boolean membership over [0, limit], plain sieve."""
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return mask


def _segmented_mask(limit: int) -> np.ndarray:
    base_lim = math.isqrt(limit)
    base_mask = _simple_mask(base_lim)
    base = np.flatnonzero(base_mask)
    mask = np.ones(limit + 1, dtype=bool)
    mask[: base_lim + 1] = base_mask
    lo = base_lim + 1
    while lo <= limit:
        hi = min(lo + SEGMENT_SIZE, limit + 1)
        for p in base:
            p = int(p)
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start < hi:
                mask[start:hi:p] = False
        lo = hi
    return mask


class PrimeTable:
    """Sieve-backed prime membership over [2, limit]."""

    __slots__ = ("limit", "_mask", "_index")

    def __init__(self, limit: int, mask: np.ndarray):
        self.limit = limit
        mask.flags.writeable = False
        self._mask = mask
        self._index: np.ndarray | None = None

    def is_prime(self, k: int) -> bool:
        if k < 1:
            raise InvalidArgumentError(f"k must be a positive integer, got {k}")
        if k > self.limit:
            raise OutOfRangeError(f"k={k} exceeds sieve limit {self.limit}")
        return bool(self._mask[k])

    def primes(self) -> np.ndarray:
        """All primes <= limit as a read-only int64 array (materialized lazily)."""
        if self._index is None:
            index = np.flatnonzero(self._mask).astype(np.int64)
            index.flags.writeable = False
            self._index = index
        return self._index

    def prime_count(self, y: int) -> int:
        """pi(y), the number of primes not exceeding y."""
        if y < 1:
            raise InvalidArgumentError(f"y must be a positive integer, got {y}")
        if y > self.limit:
            raise OutOfRangeError(f"y={y} exceeds sieve limit {self.limit}")
        return int(np.searchsorted(self.primes(), y, side="right"))

    def nth_prime(self, k: int) -> int:
        """The k-th smallest prime (1-indexed)."""
        index = self.primes()
        if k < 1:
            raise InvalidArgumentError(f"k must be a positive integer, got {k}")
        if k > index.size:
            raise OutOfRangeError(
                f"only {index.size} primes <= {self.limit}, cannot take k={k}"
            )
        return int(index[k - 1])


def build_sieve(limit: int, memory_cap: int = DEFAULT_MEMORY_CAP) -> PrimeTable:
    """Sieve all primes up to ``limit`` (inclusive).

    Raises InvalidArgumentError for limit < 2 and ResourceLimitError when the
    membership array would exceed ``memory_cap`` bytes.
    """
    if limit < 2:
        raise InvalidArgumentError(f"sieve limit must be >= 2, got {limit}")
    if limit > memory_cap:
        raise ResourceLimitError(
            f"sieve limit {limit} exceeds memory cap {memory_cap}"
        )
    if limit <= SEGMENT_THRESHOLD:
        mask = _simple_mask(limit)
    else:
        mask = _segmented_mask(limit)
    return PrimeTable(limit, mask)


def iter_prime_blocks(limit: int, segment: int = SEGMENT_SIZE):
    """Yield int64 arrays that together hold every prime <= limit, in order.

    Streams an odd-only segmented sieve; working memory is O(segment), so
    limits far above any sensible table size (10^9 and beyond) are fine.
    """
    if limit < 2:
        return
    base_lim = max(math.isqrt(limit), 3)
    base_mask = _simple_mask(base_lim)
    base = np.flatnonzero(base_mask)
    head = base[base <= limit].astype(np.int64)
    if head.size:
        yield head
    odd_base = base[1:]  # 2 never strikes in odd-only segments
    lo = base_lim + 1
    while lo <= limit:
        hi = min(lo + segment, limit + 1)
        start = lo | 1
        if start >= hi:
            lo = hi
            continue
        n_odd = (hi - start + 1) // 2
        mask = np.ones(n_odd, dtype=bool)
        for p in odd_base:
            p = int(p)
            if p * p >= hi:
                break
            first = max(p * p, ((start + p - 1) // p) * p)
            if first % 2 == 0:
                first += p
            if first < hi:
                mask[(first - start) // 2 :: p] = False
        block = start + 2 * np.flatnonzero(mask)
        if block.size:
            yield block.astype(np.int64)
        lo = hi
