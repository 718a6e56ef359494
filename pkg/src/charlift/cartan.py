"""Cartan subgroups of U(p,q) along the strongly orthogonal chain S_t.

A point stores real coordinates X_1..X_{p+q}. Each root (a, b) of S_t
contributes an angle X_a and a hyperbolic coordinate X_b, giving diagonal
entries e^{iX_a - X_b} at a and e^{iX_a + X_b} at b. Every other position c
is a pure angle, entry e^{iX_c}. Angles are never reduced mod 2pi; the lift
carries the cover sheet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RangeError, RegularityError, SingularityError
from .rootsys import (
    COINCIDENCE_TOL,
    Root,
    build_root_datum,
    check_regular_entries,
    strongly_orthogonal_set,
)

LAYOUTS = ("standard", "mirrored")


@dataclass(frozen=True)
class CartanLabel:
    t: int

    def validate(self, p: int, q: int) -> None:
        if not 0 <= self.t <= min(p, q):
            raise RangeError(f"t={self.t} outside [0, {min(p, q)}] for U({p},{q})")


@dataclass(frozen=True)
class CoveredTorusPoint:
    p: int
    q: int
    t: int
    coords: tuple[float, ...]
    layout: str = "standard"

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(float(x) for x in self.coords))
        if self.layout not in LAYOUTS:
            raise ValueError(f"unknown layout {self.layout!r}")
        if len(self.coords) != self.p + self.q:
            raise RangeError(f"U({self.p},{self.q}) needs {self.p + self.q} coordinates, got {len(self.coords)}")
        CartanLabel(self.t).validate(self.p, self.q)

    @classmethod
    def upq(cls, p: int, q: int, t: int, coords) -> "CoveredTorusPoint":
        return cls(p, q, t, tuple(coords), "standard")

    @classmethod
    def unn1(cls, n: int, t: int, coords) -> "CoveredTorusPoint":
        return cls(n, n + 1, t, tuple(coords), "mirrored")

    @property
    def dim(self) -> int:
        return self.p + self.q

    @property
    def label(self) -> CartanLabel:
        return CartanLabel(self.t)

    def pairs(self) -> list[Root]:
        return strongly_orthogonal_set(build_root_datum(self.p, self.q), self.t, self.layout)

    def compact_positions(self) -> list[int]:
        used = {k for pair in self.pairs() for k in pair}
        return [c for c in range(1, self.dim + 1) if c not in used]

    def hyperbolic_coords(self) -> list[float]:
        return [self.coords[b - 1] for _, b in self.pairs()]

    def log_entries(self) -> np.ndarray:
        X = self.coords
        logs = np.array([1j * x for x in X], dtype=complex)
        for a, b in self.pairs():
            logs[a - 1] = 1j * X[a - 1] - X[b - 1]
            logs[b - 1] = 1j * X[a - 1] + X[b - 1]
        return logs

    def entries(self) -> np.ndarray:
        return np.exp(self.log_entries())

    def with_coords(self, coords) -> "CoveredTorusPoint":
        return CoveredTorusPoint(self.p, self.q, self.t, tuple(coords), self.layout)

    def swapped(self) -> "CoveredTorusPoint":
        """Same torus element seen in U(q,p): blocks exchanged, hyperbolic signs flipped."""
        if self.layout != "standard":
            raise DomainError("block swap is only defined for the standard layout")
        p, q, t, X = self.p, self.q, self.t, self.coords
        new = [0.0] * (p + q)
        for k in range(1, t + 1):
            new[k - 1] = X[k - 1]
            new[q + k - 1] = -X[p + k - 1]
        for k in range(t + 1, q + 1):
            new[k - 1] = X[p + k - 1]
        for k in range(t + 1, p + 1):
            new[q + k - 1] = X[k - 1]
        return CoveredTorusPoint(q, p, t, tuple(new), "standard")


def cayley_generator(alpha: Root, dim: int, p: int) -> np.ndarray:
    """c(alpha) = exp(pi/4 (Y - X)) with X = E_ab, Y = E_ba: a pi/4 rotation of the (a, b) block."""
    a, b = alpha
    if not (1 <= a <= dim and 1 <= b <= dim) or a == b:
        raise RangeError(f"root {alpha} does not fit in dimension {dim}")
    if (a <= p) == (b <= p):
        raise DomainError(f"root {alpha} is compact; Cayley transforms need noncompact roots")
    c = np.eye(dim, dtype=complex)
    s = 1.0 / math.sqrt(2.0)
    c[a - 1, a - 1] = s
    c[b - 1, b - 1] = s
    c[a - 1, b - 1] = -s
    c[b - 1, a - 1] = s
    return c


def cayley_transform(S, dim: int, p: int) -> np.ndarray:
    seen: set[int] = set()
    out = np.eye(dim, dtype=complex)
    for alpha in S:
        if seen & set(alpha):
            raise DomainError(f"root {alpha} overlaps another root of S")
        seen.update(alpha)
        out = out @ cayley_generator(alpha, dim, p)
    return out


def torus_matrix(point: CoveredTorusPoint) -> np.ndarray:
    return np.diag(point.entries())


def embed_in_group(point: CoveredTorusPoint) -> np.ndarray:
    c = cayley_transform(point.pairs(), point.dim, point.p)
    # c is real orthogonal, so its inverse is the transpose
    return c @ torus_matrix(point) @ c.T


def signature_matrix(p: int, q: int) -> np.ndarray:
    return np.diag([1.0] * p + [-1.0] * q).astype(complex)


def is_regular(point: CoveredTorusPoint, tol: float = COINCIDENCE_TOL) -> bool:
    if any(abs(x) <= tol for x in point.hyperbolic_coords()):
        return False
    try:
        check_regular_entries(point.entries(), tol)
    except SingularityError:
        return False
    return True


def require_regular(point: CoveredTorusPoint, tol: float = COINCIDENCE_TOL) -> None:
    """Raise RegularityError on a zero hyperbolic coordinate, SingularityError on coincident entries."""
    for (_, b), x in zip(point.pairs(), point.hyperbolic_coords()):
        if abs(x) <= tol:
            raise RegularityError(f"non-regular point: hyperbolic coordinate X{b} is zero")
    check_regular_entries(point.entries(), tol)


@dataclass(frozen=True)
class IndexSets:
    J: frozenset[int]
    K: frozenset[int]
    A: frozenset[int]
    B: frozenset[int]


def _require_unn1(point: CoveredTorusPoint) -> int:
    if point.q != point.p + 1 or point.layout != "mirrored":
        raise DomainError("index sets are defined for U(n, n+1) points in the mirrored layout")
    return point.p


def index_sets(point: CoveredTorusPoint, tol: float = COINCIDENCE_TOL) -> IndexSets:
    n = _require_unn1(point)
    t = point.t
    J, K = set(), set()
    for j in range(1, t + 1):
        x = point.coords[2 * n + 1 - j]
        if abs(x) <= tol:
            raise RegularityError(f"non-regular point: X{2 * n + 2 - j} is zero")
        (J if x > 0 else K).add(j)
    return IndexSets(
        frozenset(J),
        frozenset(K),
        frozenset(range(t + 1, n + 1)),
        frozenset(range(n + 1, 2 * n + 2 - t)),
    )


def contour_sides(point: CoveredTorusPoint, tol: float = COINCIDENCE_TOL) -> tuple[frozenset[int], frozenset[int]]:
    """Split positions by where their entry lands relative to the unit circle.

    Returns ``(inner, outer)``. Compact positions of the first block count as
    inner and those of the second block as outer, matching the radial limits
    r -> 1- and r -> 1+. A root (a, b) puts a inside and b outside when its
    hyperbolic coordinate is positive, and the reverse when it is negative.
    """
    inner, outer = set(), set()
    for c in point.compact_positions():
        (inner if c <= point.p else outer).add(c)
    for a, b in point.pairs():
        x = point.coords[b - 1]
        if abs(x) <= tol:
            raise RegularityError(f"non-regular point: hyperbolic coordinate X{b} is zero")
        if x > 0:
            inner.add(a)
            outer.add(b)
        else:
            inner.add(b)
            outer.add(a)
    return frozenset(inner), frozenset(outer)


def _min_rotation(seq: tuple[int, ...]) -> tuple[int, ...]:
    if not seq:
        return seq
    return min(seq[k:] + seq[:k] for k in range(len(seq)))


def chamber_id(point: CoveredTorusPoint, tol: float = COINCIDENCE_TOL) -> tuple[str, tuple[int, ...]]:
    """(hyperbolic sign string, canonical cyclic order of the compact angles)."""
    require_regular(point, tol)
    signs = "".join("+" if x > 0 else "-" for x in point.hyperbolic_coords())
    compact = point.compact_positions()
    order = tuple(sorted(compact, key=lambda c: (point.coords[c - 1] % (2 * math.pi), c)))
    return signs, _min_rotation(order)


def format_chamber(cid: tuple[str, tuple[int, ...]]) -> str:
    signs, order = cid
    return f"{signs or '.'}|{'-'.join(map(str, order)) or '.'}"
