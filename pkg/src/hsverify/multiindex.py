"""Multi-indices J = (j_1, ..., j_n) and their enumeration by degree."""

from __future__ import annotations

from math import lgamma


class MultiIndex(tuple):
    """Immutable tuple of nonnegative integers.

    Behaves like a plain tuple (hashable, comparable, usable as a dict key)
    with ``degree`` and ``log_factorial`` attached.
    """

    __slots__ = ()

    def __new__(cls, parts):
        parts = tuple(int(p) for p in parts)
        if not parts:
            raise ValueError("a multi-index needs at least one entry")
        if any(p < 0 for p in parts):
            raise ValueError(f"multi-index entries must be nonnegative, got {parts}")
        return super().__new__(cls, parts)

    @property
    def n(self) -> int:
        return len(self)

    @property
    def degree(self) -> int:
        return sum(self)

    @property
    def log_factorial(self) -> float:
        return log_factorial(self)

    def __repr__(self):
        return f"MultiIndex({tuple(self)!r})"


def degree(J) -> int:
    """|J| = j_1 + ... + j_n."""
    return sum(J)


def log_factorial(J) -> float:
    """ln(J!) = sum_i ln(j_i!), via log-gamma."""
    # lgamma(1) and lgamma(2) are exactly 0.0, so small entries add nothing
    return float(sum(lgamma(j + 1) for j in J if j > 1))


def zero(n: int) -> MultiIndex:
    return MultiIndex((0,) * n)


def enumerate_degree(n: int, k: int) -> list[MultiIndex]:
    """All multi-indices of length ``n`` and degree ``k``.

    Ordered lexicographically descending, so the first coordinate decreases
    fastest: ``enumerate_degree(2, 2) == [(2, 0), (1, 1), (0, 2)]``.
    The list has ``C(k + n - 1, n - 1)`` entries.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if k < 0:
        raise ValueError("k must be >= 0")
    return [MultiIndex(p) for p in _compositions(n, k)]


def _compositions(n, k):
    if n == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in _compositions(n - 1, k - first):
            yield (first,) + rest


def enumerate_up_to(n: int, k_max: int) -> list[MultiIndex]:
    """All multi-indices of length ``n`` with degree <= ``k_max``, grouped by degree."""
    out = []
    for k in range(k_max + 1):
        out.extend(enumerate_degree(n, k))
    return out
