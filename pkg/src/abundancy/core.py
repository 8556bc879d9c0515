"""Primes, factorization, and divisor machinery.

Everything here returns exact Python integers. Factorization uses a
smallest-prime-factor table below a size cap and trial division above it,
so repeated small queries are cheap without unbounded memory growth.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

import numpy as np

# SPF table is grown lazily in power-of-two steps, never past this cap.
_SPF_CAP = 1 << 20

_spf: np.ndarray | None = None


def primes_up_to(limit: int) -> list[int]:
    """All primes <= limit, ascending. Empty list for limit < 2."""
    if limit < 2:
        return []
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return [int(p) for p in np.nonzero(mask)[0]]


def _spf_table(upto: int) -> np.ndarray:
    global _spf
    if _spf is None or len(_spf) <= upto:
        size = 1 << 16
        while size <= upto:
            size <<= 1
        size = min(size, _SPF_CAP)
        table = np.zeros(size, dtype=np.int64)
        table[1] = 1
        for p in range(2, size):
            if table[p] == 0:
                sl = table[p::p]
                sl[sl == 0] = p
        _spf = table
    return _spf


@dataclass(frozen=True)
class Factorization:
    """Prime factorization of a positive integer.

    factors: ((p, a), ...) with primes strictly increasing and a >= 1.
    The empty tuple represents 1.
    """

    factors: tuple[tuple[int, int], ...]
    value: int

    def __iter__(self):
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def exponent(self, p: int) -> int:
        for q, a in self.factors:
            if q == p:
                return a
        return 0


def factorize(n: int) -> Factorization:
    """Factor n >= 1. Raises ValueError for n < 1."""
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    value = n
    factors: list[tuple[int, int]] = []
    if n < _SPF_CAP:
        table = _spf_table(n)
        while n > 1:
            p = int(table[n])
            a = 0
            while n % p == 0:
                n //= p
                a += 1
            factors.append((p, a))
    else:
        d = 2
        while d * d <= n:
            if n % d == 0:
                a = 0
                while n % d == 0:
                    n //= d
                    a += 1
                factors.append((d, a))
            d += 1 if d == 2 else 2
        if n > 1:
            factors.append((n, 1))
    factors.sort()
    return Factorization(tuple(factors), value)


def divisors(n: int) -> list[int]:
    """Ascending list of divisors of n >= 1."""
    fac = factorize(n)
    ds = [1]
    for p, a in fac:
        pk = 1
        block = list(ds)
        for _ in range(a):
            pk *= p
            ds.extend(d * pk for d in block)
    ds.sort()
    return ds
