"""Pointwise values B(l, n) by three independent routes.

B(l, n) is the sum over divisor chains d_1 | d_2 | ... | d_{l-1} | n of the
product d_1 * ... * d_{l-1}. The three routes:

  * b_via_flags: literal chain enumeration;
  * b_via_recursion: B(l, n) = sum_{d|n} (n/d)^{l-1} B(l-1, d), B(1, .) = 1;
  * b_via_multiplicativity: product of per-prime local factors.

The routes share no code on purpose. l = 1 is admitted by the first two as
the recursion anchor (value 1); the local-factor route requires l >= 2.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .core import divisors, factorize
from .qseries import qpoch


def b_via_flags(ell: int, n: int) -> int:
    """Chain enumeration: sum of d_1*...*d_{l-1} over d_1|...|d_{l-1}|n."""
    if ell < 1 or n < 1:
        raise ValueError("need ell >= 1 and n >= 1")
    total = 0
    # stack holds (remaining chain length, top divisor, product so far)
    stack = [(ell - 1, n, 1)]
    while stack:
        depth, top, prod = stack.pop()
        if depth == 0:
            total += prod
            continue
        for d in divisors(top):
            stack.append((depth - 1, d, prod * d))
    return total


@lru_cache(maxsize=None)
def b_via_recursion(ell: int, n: int) -> int:
    if ell < 1 or n < 1:
        raise ValueError("need ell >= 1 and n >= 1")
    if ell == 1:
        return 1
    return sum((n // d) ** (ell - 1) * b_via_recursion(ell - 1, d) for d in divisors(n))


def local_factor(ell: int, p: int, a: int) -> int:
    """Value at a prime power: p^{(l-1)a} (p^{-a-1}; p^{-1})_{l-1} / (p^{-1}; p^{-1})_{l-1}.

    Evaluated as exact rationals with integrality asserted; a failed
    assertion would mean the quotient formula itself is wrong.
    """
    if ell < 2:
        raise ValueError("local_factor needs ell >= 2")
    if a < 0:
        raise ValueError("exponent must be >= 0")
    if a == 0:
        return 1
    pinv = Fraction(1, p)
    num = qpoch(Fraction(1, p ** (a + 1)), pinv, ell - 1)
    den = qpoch(pinv, pinv, ell - 1)
    value = Fraction(p) ** ((ell - 1) * a) * num / den
    if value.denominator != 1:
        raise ArithmeticError(
            f"local factor not integral at (ell={ell}, p={p}, a={a}): {value}"
        )
    return value.numerator


def b_via_multiplicativity(ell: int, n: int) -> int:
    if ell < 2:
        raise ValueError("b_via_multiplicativity needs ell >= 2")
    out = 1
    for p, a in factorize(n):
        out *= local_factor(ell, p, a)
    return out


def abundancy_index(ell: int, n: int) -> Fraction:
    """B(l, n) / n^{l-1} as an exact rational."""
    if ell < 2:
        raise ValueError("abundancy_index needs ell >= 2")
    return Fraction(b_via_multiplicativity(ell, n), n ** (ell - 1))
