"""Exact generating series tying B(ell, n) to the tuple counts A(ell, n, k).

With L(z) = sum_{n>=1} B(ell,n) z^n / n, the double series exp(x L(z))
has z^n x^k coefficient A(ell,n,k)/n!. Differentiating in z gives
n g_n = x sum_m B(m) g_{n-m}, which in terms of the integer rows reads

    A(n, k) = sum_{m=1}^{n} B(m) * (n-1)!/(n-m)! * A(n-m, k-1)

so the whole triangle is built division-free in exact integers.

Also here: partition numbers by the pentagonal recurrence (an independent
oracle, since sum_k A(2,n,k)/n! = p(n)), a trapezoidal contour extraction
of single coefficients checked against the exact value, and the ell=2
ratio of H_{2,n}(x) to its exponential growth approximation.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from math import exp, factorial, pi, sqrt

from .permtuples import ATable
from .sieve import sieve_b


@dataclass(frozen=True)
class SeriesPoly:
    """Integer coefficient triangle rows[n][k] = A(ell, n, k) = n! [x^k z^n]."""

    ell: int
    N: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.rows) != self.N + 1:
            raise ValueError("need rows for n = 0..N")
        if self.rows[0] != (1,):
            raise ValueError("row 0 must be (1,)")
        for n in range(1, self.N + 1):
            if len(self.rows[n]) != n + 1 or self.rows[n][0] != 0:
                raise ValueError(f"row {n} malformed")

    def coeff(self, n: int, k: int) -> Fraction:
        """[x^k z^n] exp(x L(z)) = A(ell,n,k)/n!; zero outside the triangle."""
        if not 0 <= n <= self.N:
            raise IndexError(f"n out of range 0..{self.N}: {n}")
        if k < 0 or k > n:
            return Fraction(0)
        return Fraction(self.rows[n][k], factorial(n))

    def a_row(self, n: int) -> ATable:
        if not 1 <= n <= self.N:
            raise IndexError(f"n out of range 1..{self.N}: {n}")
        return ATable(ell=self.ell, n=n, counts=tuple(self.rows[n][1:]))

    def h_at(self, n: int, x) -> Fraction:
        """H_{ell,n}(x) = sum_k A(ell,n,k) x^k / n!, exact."""
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.rows[n]):
            acc = acc * x + c
        return acc / factorial(n)


def series_L(ell: int, N: int) -> list[Fraction]:
    """Coefficients l_n = B(ell,n)/n for n = 1..N; index 0 is a zero pad."""
    if N < 1:
        raise ValueError("N must be >= 1")
    b = sieve_b(ell, N)
    return [Fraction(0)] + [Fraction(b[n], n) for n in range(1, N + 1)]


def exp_series(ell: int, N: int) -> SeriesPoly:
    """The full coefficient triangle A(ell, n, k) for n <= N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    b = sieve_b(ell, N)
    rows: list[tuple[int, ...]] = [(1,)]
    for n in range(1, N + 1):
        row = [0] * (n + 1)
        ff = 1  # (n-1)!/(n-m)!, updated as m advances
        for m in range(1, n + 1):
            if m > 1:
                ff *= n - m + 1
            w = b[m] * ff
            prev = rows[n - m]
            for k in range(1, n - m + 2):
                row[k] += w * prev[k - 1]
        rows.append(tuple(row))
    return SeriesPoly(ell=ell, N=N, rows=tuple(rows))


def partition_numbers(N: int) -> list[int]:
    """p(0..N) by the pentagonal number recurrence, exact."""
    if N < 0:
        raise ValueError("N must be >= 0")
    p = [0] * (N + 1)
    p[0] = 1
    for n in range(1, N + 1):
        total = 0
        j = 1
        while True:
            g = j * (3 * j - 1) // 2
            if g > n:
                break
            sign = -1 if j % 2 == 0 else 1
            total += sign * p[n - g]
            g2 = j * (3 * j + 1) // 2
            if g2 <= n:
                total += sign * p[n - g2]
            j += 1
        p[n] = total
    return p


def h_vector(ell: int, N: int, x) -> list[Fraction]:
    """H_{ell,n}(x) for n = 0..N, by the scalar form of the same recurrence.

    Cheaper than exp_series when only point values of the polynomials are
    needed (the k-resolved triangle is never formed).
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    x = Fraction(x)
    h = [Fraction(1)]
    if N == 0:
        return h
    b = sieve_b(ell, N)
    for n in range(1, N + 1):
        acc = Fraction(0)
        for m in range(1, n + 1):
            acc += b[m] * h[n - m]
        h.append(x * acc / n)
    return h


def h_point(ell: int, N: int, x) -> Fraction:
    """H_{ell,N}(x) alone; see h_vector."""
    return h_vector(ell, N, x)[N]


@dataclass(frozen=True)
class CauchyReport:
    ell: int
    n: int
    k: int
    r: float
    M: int
    n_trunc: int
    numeric: float
    exact: Fraction
    abs_err: float


def cauchy_check(
    ell: int, n: int, k: int, r: float, M: int, n_trunc: int | None = None
) -> CauchyReport:
    """Recover A(ell,n,k)/n! by contour quadrature and compare exactly.

    The coefficient is (1/2 pi i) oint L(z)^k / (k! z^{n+1}) dz; on the
    circle |z| = r the trapezoid rule over M equispaced angles is spectral
    in M. L is truncated at n_trunc >= n, which leaves the target
    coefficient untouched (only aliased orders ~ r^M are perturbed).
    The k-th power is taken as a literal complex power of the polynomial
    value, so no branch choice ever arises.
    """
    if not 0.0 < r < 1.0:
        raise ValueError(f"r must lie in (0,1): {r}")
    if M < 1:
        raise ValueError("M must be >= 1")
    if k < 0 or n < 0:
        raise ValueError("n and k must be >= 0")
    if n_trunc is None:
        n_trunc = max(n + 2, 48)
    if n_trunc < n:
        raise ValueError(f"n_trunc ({n_trunc}) must be >= n ({n})")
    if n == 0:
        exact = Fraction(1) if k == 0 else Fraction(0)
    elif k == 0 or k > n:
        exact = Fraction(0)
    else:
        exact = exp_series(ell, n).coeff(n, k)
    b = sieve_b(ell, n_trunc)
    l_coef = [0.0] + [b[m] / m for m in range(1, n_trunc + 1)]
    kfact = float(factorial(k))
    acc = 0.0 + 0.0j
    for j in range(M):
        z = cmath.rect(r, 2.0 * pi * j / M)
        lz = 0.0 + 0.0j
        for c in reversed(l_coef):
            lz = lz * z + c
        acc += lz**k / z**n
    numeric = (acc / (M * kfact)).real
    return CauchyReport(
        ell=ell,
        n=n,
        k=k,
        r=r,
        M=M,
        n_trunc=n_trunc,
        numeric=numeric,
        exact=exact,
        abs_err=abs(numeric - float(exact)),
    )


def hr_ratio(n: int, x) -> float:
    """H_{2,n}(x) against its predicted exponential growth, as a ratio.

    The reference is x^{(1+x)/4} 2^{-(5+3x)/4} 3^{-(1+x)/4} n^{-(3+x)/4}
    exp(2 sqrt(x zeta(2) n)); the ratio should drift toward 1 as n grows
    with x fixed. x = 1 specializes to the Hardy-Ramanujan form for p(n).
    """
    from .stats import zeta

    if n < 1:
        raise ValueError("n must be >= 1")
    xf = float(x)
    if xf <= 0.0:
        raise ValueError("x must be positive")
    exact = float(h_point(2, n, Fraction(x)))
    z2 = zeta(2, 1e-15)
    asym = (
        xf ** ((1.0 + xf) / 4.0)
        * 2.0 ** (-(5.0 + 3.0 * xf) / 4.0)
        * 3.0 ** (-(1.0 + xf) / 4.0)
        * n ** (-(3.0 + xf) / 4.0)
        * exp(2.0 * sqrt(xf * z2 * n))
    )
    return exact / asym
