"""Twisted discrete tori realizing the transitive commuting tuples.

A torus spec is a dimension vector (f_1, ..., f_ell) together with, for
each direction r >= 2, a twist vector phi in [f_1] x ... x [f_{r-1}].
Vertices are coordinate tuples (i_1, ..., i_ell) with i_r in {1..f_r},
encoded mixed-radix with i_1 fastest. Direction 1 steps cyclically;
direction r steps coordinate r and, on wrapping past f_r, additionally
advances the lower block by the twist: phi_1 - 1 steps of direction 1,
then phi_2 - 1 steps of direction 2, and so on up to direction r - 1.

Each direction r thus defines a permutation pi_r of the vertex set; the
pi_r commute pairwise, act transitively, and generate a group of order
n = f_1 ... f_ell with the basepoint map (c_1..c_ell) -> prod pi_r^{c_r}
applied to vertex (1,..,1) a bijection. Counting specs per n recovers
B(ell, n), and relabeling vertices in all n! ways recovers every
transitive commuting tuple exactly once per (n-1)! labelings:

    A(ell, n, 1) = (n-1)! B(ell, n)

double_count_check verifies that set equality against the brute-force
enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import factorial
from pathlib import Path

import numpy as np

from .bvalues import b_via_flags
from .core import divisors
from .errors import BudgetError
from .permtuples import PermTuple, transitive_tuples

DEFAULT_MAX_WORK = 26_000_000
VALIDATE_MAX_N = 2048


@dataclass(frozen=True)
class TorusSpec:
    """Dimensions (f_1..f_ell) and twists; twists[r-2] is phi for direction r."""

    dims: tuple[int, ...]
    twists: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.dims:
            raise ValueError("dims must be non-empty")
        if any(f < 1 for f in self.dims):
            raise ValueError(f"dimensions must be positive: {self.dims}")
        ell = len(self.dims)
        if len(self.twists) != ell - 1:
            raise ValueError(
                f"need {ell - 1} twist vectors for ell={ell}, got {len(self.twists)}"
            )
        for r in range(2, ell + 1):
            phi = self.twists[r - 2]
            if len(phi) != r - 1:
                raise ValueError(
                    f"twist for direction {r} must have length {r - 1}: {phi}"
                )
            for s, v in enumerate(phi, start=1):
                if not 1 <= v <= self.dims[s - 1]:
                    raise ValueError(
                        f"twist component {v} out of range 1..{self.dims[s - 1]}"
                    )

    @property
    def ell(self) -> int:
        return len(self.dims)

    @property
    def n(self) -> int:
        out = 1
        for f in self.dims:
            out *= f
        return out


@dataclass(frozen=True)
class EdgeRecord:
    """Collapsed undirected edge between vertices u <= v (1-based indices)."""

    u: int
    v: int
    solid: int
    dashed: int

    @property
    def multiplicity(self) -> int:
        return self.solid + self.dashed


@dataclass(frozen=True, eq=False)
class TorusRealization:
    spec: TorusSpec
    perms: PermTuple
    pi_arrays: tuple[np.ndarray, ...] = field(repr=False)  # 0-based copies

    @cached_property
    def coords(self) -> tuple[tuple[int, ...], ...]:
        """coords[u-1] is the coordinate tuple of vertex u, i_1 fastest."""
        n = self.spec.n
        cols = []
        rem = np.arange(n, dtype=np.int64)
        for f in self.spec.dims:
            cols.append(rem % f + 1)
            rem //= f
        return tuple(zip(*(c.tolist() for c in cols)))

    @cached_property
    def edges(self) -> tuple[EdgeRecord, ...]:
        """Collapsed undirected step edges; wrap steps counted as dashed."""
        n = self.spec.n
        counts: dict[tuple[int, int], list[int]] = {}
        block = 1
        for r, f in enumerate(self.spec.dims, start=1):
            pi = self.pi_arrays[r - 1]
            for u in range(n):
                v = int(pi[u])
                key = (min(u, v) + 1, max(u, v) + 1)
                slot = counts.setdefault(key, [0, 0])
                wrapped = (u // block) % f == f - 1
                slot[1 if wrapped else 0] += 1
            block *= f
        return tuple(
            EdgeRecord(u=k[0], v=k[1], solid=c[0], dashed=c[1])
            for k, c in sorted(counts.items())
        )


def _lift(perm: np.ndarray, size: int) -> np.ndarray:
    """Block-diagonal extension of perm to [0, size), size a multiple of len."""
    m = perm.shape[0]
    base = np.arange(0, size, m, dtype=np.int64).reshape(-1, 1)
    return (base + perm).ravel()


def build_torus(spec: TorusSpec) -> TorusRealization:
    """Construct the vertex permutations, coordinates, and edge list."""
    dims = spec.dims
    ell = spec.ell
    rhos: list[np.ndarray] = []  # rhos[r-1] permutes the first f_1..f_r block
    m = 1
    for r in range(1, ell + 1):
        f = dims[r - 1]
        if r == 1:
            rho = (np.arange(f, dtype=np.int64) + 1) % f
        else:
            chain = np.arange(m, dtype=np.int64)
            phi = spec.twists[r - 2]
            for t in range(1, r):
                steps = phi[t - 1] - 1
                if steps:
                    lifted = _lift(rhos[t - 1], m)
                    for _ in range(steps):
                        chain = lifted[chain]
            rho = np.empty(m * f, dtype=np.int64)
            rho[: (f - 1) * m] = np.arange(m, f * m, dtype=np.int64)
            rho[(f - 1) * m :] = chain
        rhos.append(rho)
        m *= f
    n = m
    pis = tuple(_lift(rho, n) for rho in rhos)
    perms = PermTuple(perms=tuple(tuple((pi + 1).tolist()) for pi in pis))
    return TorusRealization(spec=spec, perms=perms, pi_arrays=pis)


@dataclass(frozen=True)
class TorusChecks:
    commutes: bool
    transitive: bool
    group_order_n: bool
    basepoint_bijective: bool

    def all_true(self) -> bool:
        return (
            self.commutes
            and self.transitive
            and self.group_order_n
            and self.basepoint_bijective
        )


def _row_canon(M: np.ndarray) -> bytes:
    """Order-free fingerprint of a matrix viewed as a set of rows."""
    return M[np.lexsort(M.T)].tobytes()


def validate(real: TorusRealization, *, max_n: int = VALIDATE_MAX_N) -> TorusChecks:
    """The four structural checks; failures are reported, not raised.

    group_order_n materializes all prod_r pi_r^{c_r} with c_r < f_r as an
    n x n matrix of permutation rows; the generated group has order n iff
    those rows are n distinct permutations and the set is closed under
    every generator (inverses are positive powers in a finite group).
    Closure under pi is tested as set equality pi G = G; left
    multiplication by a permutation is injective, so sorted-row equality
    suffices. Checks read real.perms, so a tampered tuple is seen.
    """
    pis = [np.asarray(p, dtype=np.int64) - 1 for p in real.perms.perms]
    n = pis[0].shape[0]
    if n > max_n:
        raise BudgetError(f"validate materializes an n x n table; n={n} > {max_n}")
    commutes = all(
        np.array_equal(p[q], q[p]) for p, q in itertools.combinations(pis, 2)
    )
    transitive = real.perms.orbit_count() == 1
    G = np.empty((n, n), dtype=np.int64)
    G[0] = np.arange(n, dtype=np.int64)
    count = 1
    for pi, f in zip(pis, real.spec.dims):
        for t in range(1, f):
            G[t * count : (t + 1) * count] = pi[G[(t - 1) * count : t * count]]
        count *= f
    Gs = G[np.lexsort(G.T)]
    distinct = n == 1 or not np.any(np.all(Gs[1:] == Gs[:-1], axis=1))
    canon = Gs.tobytes()
    closed = all(_row_canon(pi[G]) == canon for pi in pis)
    basepoint_bijective = np.unique(G[:, 0]).size == n
    return TorusChecks(
        commutes=commutes,
        transitive=transitive,
        group_order_n=bool(distinct and closed),
        basepoint_bijective=bool(basepoint_bijective),
    )


# ---------------------------------------------------------------------------
# spec enumeration and double counting

def _ordered_factorizations(n: int, ell: int):
    if ell == 1:
        yield (n,)
        return
    for f1 in divisors(n):
        for rest in _ordered_factorizations(n // f1, ell - 1):
            yield (f1,) + rest


def all_specs(ell: int, n: int):
    """Every TorusSpec with ell dimensions multiplying to n."""
    if ell < 1 or n < 1:
        raise ValueError("ell and n must be >= 1")
    for dims in _ordered_factorizations(n, ell):
        per_direction = [
            itertools.product(*(range(1, dims[s] + 1) for s in range(r - 1)))
            for r in range(2, ell + 1)
        ]
        for combo in itertools.product(*per_direction):
            yield TorusSpec(dims=dims, twists=tuple(combo))


def spec_count(ell: int, n: int) -> int:
    """Number of specs with f_1...f_ell = n: sum over dims of prod f_s^{ell-s}.

    Equals B(ell, n); the twist choices per dims are counted arithmetically
    rather than materialized.
    """
    if ell < 1 or n < 1:
        raise ValueError("ell and n must be >= 1")
    total = 0
    for dims in _ordered_factorizations(n, ell):
        c = 1
        for s in range(1, ell):
            c *= dims[s - 1] ** (ell - s)
        total += c
    return total


def _relabel(
    perms: tuple[tuple[int, ...], ...], sigma: tuple[int, ...]
) -> tuple[tuple[int, ...], ...]:
    n = len(sigma)
    out = []
    for p in perms:
        q = [0] * n
        for i in range(n):
            q[sigma[i] - 1] = sigma[p[i] - 1]
        out.append(tuple(q))
    return tuple(out)


@dataclass(frozen=True)
class DoubleCountResult:
    ell: int
    n: int
    count: int
    expected: int
    match: bool


def double_count_check(
    ell: int, n: int, *, max_work: int = DEFAULT_MAX_WORK
) -> DoubleCountResult:
    """Tori-with-relabelings against brute force, as sets.

    Builds every spec with product n, relabels each realization's tuple by
    all n! vertex bijections, dedupes, and compares with the enumerated
    transitive tuples. match also requires count = (n-1)! B(ell, n).
    """
    brute = transitive_tuples(ell, n, max_work=max_work)
    seen: set[tuple[tuple[int, ...], ...]] = set()
    sigmas = list(itertools.permutations(range(1, n + 1)))
    for spec in all_specs(ell, n):
        perms = build_torus(spec).perms.perms
        for sigma in sigmas:
            seen.add(_relabel(perms, sigma))
    expected = factorial(n - 1) * b_via_flags(ell, n)
    match = seen == brute and len(seen) == expected
    return DoubleCountResult(
        ell=ell, n=n, count=len(seen), expected=expected, match=match
    )


# ---------------------------------------------------------------------------
# export

def export_dot(real: TorusRealization, path: str | Path) -> None:
    """Deterministic DOT rendering: wrap edges dashed, multi-edges collapsed."""
    names = {u + 1: "(" + ",".join(map(str, c)) + ")" for u, c in enumerate(real.coords)}
    lines = ["graph torus {"]
    for u in range(1, len(real.coords) + 1):
        lines.append(f'  "{names[u]}";')
    for e in real.edges:
        attrs = []
        if e.dashed > 0:
            attrs.append("style=dashed")
        if e.multiplicity > 1:
            attrs.append(f"multiplicity={e.multiplicity}")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f'  "{names[e.u]}" -- "{names[e.v]}"{suffix};')
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n")
