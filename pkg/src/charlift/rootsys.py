"""Type A root data, Weyl denominators and the Delta-quotient.

Roots are integer pairs ``(i, j)`` (1-based) standing for e_i - e_j. Points
are anything exposing ``log_entries()``, the unreduced logarithms of the
diagonal entries, so half-powers stay single-valued on the double cover.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyGroupError, RangeError, SingularityError

Root = tuple[int, int]

COINCIDENCE_TOL = 1e-10


@dataclass(frozen=True)
class RootDatum:
    p: int
    q: int
    roots: tuple[Root, ...] = field(repr=False)
    positive: tuple[bool, ...] = field(repr=False)
    compact: tuple[bool, ...] = field(repr=False)

    @property
    def dim(self) -> int:
        return self.p + self.q

    def is_compact(self, root: Root) -> bool:
        i, j = root
        return (i <= self.p) == (j <= self.p)

    def is_root(self, root: Root) -> bool:
        i, j = root
        return i != j and 1 <= i <= self.dim and 1 <= j <= self.dim

    def positive_roots(self) -> list[Root]:
        return [r for r, pos in zip(self.roots, self.positive) if pos]


def build_root_datum(p: int, q: int) -> RootDatum:
    if p < 0 or q < 0:
        raise RangeError(f"p and q must be non-negative, got ({p}, {q})")
    if p + q == 0:
        raise EmptyGroupError("U(0,0) has no roots")
    dim = p + q
    roots = tuple((i, j) for i in range(1, dim + 1) for j in range(1, dim + 1) if i != j)
    positive = tuple(i < j for i, j in roots)
    compact = tuple((i <= p) == (j <= p) for i, j in roots)
    return RootDatum(p, q, roots, positive, compact)


def _root_sum(a: Root, b: Root, sign: int) -> Root | None:
    """Return a + sign*b as a root pair if the combination is of the form e_i - e_j."""
    vec: dict[int, int] = {}
    for (i, j), s in ((a, 1), (b, sign)):
        vec[i] = vec.get(i, 0) + s
        vec[j] = vec.get(j, 0) - s
    support = {k: v for k, v in vec.items() if v}
    if sorted(support.values()) != [-1, 1]:
        return None
    plus = next(k for k, v in support.items() if v == 1)
    minus = next(k for k, v in support.items() if v == -1)
    return (plus, minus)


def strongly_orthogonal(datum: RootDatum, a: Root, b: Root) -> bool:
    if a == b or a == (b[1], b[0]):
        return False
    for sign in (1, -1):
        r = _root_sum(a, b, sign)
        if r is not None and datum.is_root(r):
            return False
    return True


def strongly_orthogonal_set(datum: RootDatum, t: int, layout: str = "standard") -> list[Root]:
    """The chain S_t.

    ``standard`` pairs k with p+k. ``mirrored`` pairs k with p+q+1-k, the
    placement used for U(n, n+1) where the hyperbolic coordinates sit at the
    end of the coordinate vector.
    """
    if not 0 <= t <= min(datum.p, datum.q):
        raise RangeError(f"t={t} outside [0, {min(datum.p, datum.q)}]")
    if layout == "standard":
        return [(k, datum.p + k) for k in range(1, t + 1)]
    if layout == "mirrored":
        return [(k, datum.dim + 1 - k) for k in range(1, t + 1)]
    raise ValueError(f"unknown layout {layout!r}")


def _logs_of(point) -> np.ndarray:
    if hasattr(point, "log_entries"):
        return np.asarray(point.log_entries(), dtype=complex)
    return np.asarray(point, dtype=complex)


def weyl_denominator_logs(logs: np.ndarray, side: str = "psi") -> complex:
    """Weyl denominator from log-coordinates; ``side`` is ``psi`` or ``phi``."""
    logs = np.asarray(logs, dtype=complex)
    n = logs.size
    i, j = np.triu_indices(n, k=1)
    diff = logs[i] - logs[j]
    if side == "psi":
        return complex(np.exp(0.5 * diff.sum()) * np.prod(1.0 - np.exp(-diff)))
    if side == "phi":
        return complex(np.exp(-0.5 * diff.sum()) * np.prod(1.0 - np.exp(diff)))
    raise ValueError(f"side must be 'psi' or 'phi', got {side!r}")


def weyl_denominator(datum: RootDatum, side: str, point) -> complex:
    logs = _logs_of(point)
    if logs.size != datum.dim:
        raise RangeError(f"point has {logs.size} coordinates, group needs {datum.dim}")
    return weyl_denominator_logs(logs, side)


def check_regular_entries(h: np.ndarray, tol: float = COINCIDENCE_TOL) -> None:
    """Raise SingularityError naming the first coincident pair (1-based)."""
    n = len(h)
    for a in range(n):
        for b in range(a + 1, n):
            if abs(h[a] - h[b]) < tol * max(1.0, abs(h[a])):
                raise SingularityError(a + 1, b + 1)


@dataclass(frozen=True)
class DeltaQuotient:
    i: int
    j: int
    value: complex


def delta_quotient(n: int, i: int, j: int, point, tol: float = COINCIDENCE_TOL) -> DeltaQuotient:
    logs = _logs_of(point)
    size = 2 * n + 1
    if logs.size != size:
        raise RangeError(f"expected {size} coordinates, got {logs.size}")
    if i == j or not (1 <= i <= size and 1 <= j <= size):
        raise RangeError(f"invalid index pair ({i}, {j})")
    h = np.exp(logs)
    check_regular_entries(h, tol)
    a, b = i - 1, j - 1
    others = [k for k in range(size) if k not in (a, b)]
    num = np.exp(n * logs[a] + n * logs[b] + logs[others].sum())
    den_i = np.prod([h[a] - h[k] for k in range(size) if k != a])
    den_j = np.prod([h[b] - h[k] for k in others])
    return DeltaQuotient(i, j, complex(num / (den_i * den_j)))


def permutation_sign(perm) -> int:
    perm = list(perm)
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def permuted_weyl_quotient(n: int, sigma, point) -> complex:
    """eps(sigma) * Delta_{Phi(Z_n)}(sigma^{-1} h) / Delta_{Phi_n}(h).

    ``sigma`` is a 0-based permutation of range(2n+1); sigma^{-1} h has
    components h_{sigma(k)}. The Z_n factor lives on the middle 2n-1
    positions, so the result depends only on sigma(1) and sigma(2n+1).
    """
    logs = _logs_of(point)
    moved = logs[list(sigma)]
    inner = weyl_denominator_logs(moved[1:-1], "phi") if 2 * n - 1 > 1 else 1.0 + 0j
    return permutation_sign(sigma) * inner / weyl_denominator_logs(logs, "phi")


def permutations_with_ends(size: int, first: int, last: int):
    """All 0-based permutations sigma of range(size) with sigma[0]=first, sigma[-1]=last."""
    rest = [k for k in range(size) if k not in (first, last)]
    for mid in itertools.permutations(rest):
        yield (first, *mid, last)
