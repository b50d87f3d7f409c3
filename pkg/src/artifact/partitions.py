"""Integer partitions and multipartitions."""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from math import factorial, prod
from typing import Iterator, Sequence

Partition = tuple


@lru_cache(maxsize=None)
def partitions(n: int, max_part: int | None = None) -> tuple:
    """All partitions of n (parts <= max_part), in reverse lexicographic order."""
    if max_part is None:
        max_part = n
    if n == 0:
        return ((),)
    out = []
    for k in range(min(n, max_part), 0, -1):
        for rest in partitions(n - k, k):
            out.append((k,) + rest)
    return tuple(out)


def normalize(parts: Sequence[int]) -> Partition:
    return tuple(sorted((p for p in parts if p), reverse=True))


def conjugate(lam: Sequence[int]) -> Partition:
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > i) for i in range(lam[0]))


def n_stat(lam: Sequence[int]) -> int:
    """n(lambda) = sum (i-1) lambda_i."""
    return sum(i * p for i, p in enumerate(lam))


def z_value(lam: Sequence[int]) -> int:
    return prod(k ** m * factorial(m) for k, m in Counter(lam).items())


def dominates(lam: Sequence[int], mu: Sequence[int]) -> bool:
    a = b = 0
    for i in range(max(len(lam), len(mu))):
        a += lam[i] if i < len(lam) else 0
        b += mu[i] if i < len(mu) else 0
        if a < b:
            return False
    return True


def multipartitions(n: int, r: int) -> Iterator[tuple]:
    """All r-tuples of partitions of n."""
    if r == 0:
        yield ()
        return
    for head in partitions(n):
        for tail in multipartitions(n, r - 1):
            yield (head,) + tail


def column_of(mu: Sequence[int]) -> tuple:
    """Flag dimension column (n, n - mu_1, n - mu_1 - mu_2, ..., 0) for parts mu."""
    n = sum(mu)
    out = [n]
    for part in mu:
        out.append(out[-1] - part)
    return tuple(out)


def parse_partition(text: str) -> Partition:
    """'2.1', '2,1' or '21' -> (2, 1)."""
    text = text.strip().replace(",", ".")
    if "." in text:
        return tuple(int(x) for x in text.split("."))
    return tuple(int(ch) for ch in text)


def format_partition(lam: Sequence[int]) -> str:
    return ".".join(str(p) for p in lam)
