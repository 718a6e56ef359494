"""Closed-form character values.

Every character value here is only defined up to a global constant, so the
results carry the tag ``up_to_global_constant``. Comparisons against the
oracles go through a one-point calibration.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .cartan import (
    CartanLabel,
    CoveredTorusPoint,
    contour_sides,
    require_regular,
)
from .errors import CayleyDomainError, DomainError, RangeError, RegularityError
from .rootsys import COINCIDENCE_TOL, check_regular_entries

ABSOLUTE = "absolute"
UP_TO_CONSTANT = "up_to_global_constant"

KINDS = ("seed_u1", "lift_upq", "double_lift_unn1")


@dataclass(frozen=True)
class NormalizedValue:
    value: complex
    normalization: str = UP_TO_CONSTANT

    def __complex__(self) -> complex:
        return complex(self.value)


@dataclass(frozen=True)
class CharacterSpec:
    kind: str
    shape: tuple[int, ...]
    m: int
    label: CartanLabel = CartanLabel(0)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown character kind {self.kind!r}")
        if self.kind == "double_lift_unn1":
            if len(self.shape) != 1 or self.shape[0] < 1:
                raise DomainError("double lift needs shape (n,) with n >= 1")
            self.label.validate(self.shape[0], self.shape[0] + 1)
        elif len(self.shape) != 2:
            raise DomainError("seed and U(p,q) lift need shape (p, q)")
        elif self.kind == "lift_upq":
            self.label.validate(*self.shape)

    @classmethod
    def upq(cls, p: int, q: int, m: int, t: int = 0) -> "CharacterSpec":
        return cls("lift_upq", (p, q), m, CartanLabel(t))

    @classmethod
    def unn1(cls, n: int, m: int, t: int = 0) -> "CharacterSpec":
        return cls("double_lift_unn1", (n,), m, CartanLabel(t))


@dataclass(frozen=True)
class NormalizationConstants:
    """Unpinned constants of the double-lift formula: overall scale, Omega-part and boundary term."""

    overall: complex = 1.0
    a_tilde: complex = 1.0
    b: complex = 1.0


def theta_u1(m: int, p: int, q: int, angle_lift: float) -> NormalizedValue:
    return NormalizedValue(cmath.exp(1j * angle_lift * (m + (q - p) / 2)))


# --- U(p,q) lift -----------------------------------------------------------


def upq_holomorphic_side(p: int, q: int, m: int) -> bool:
    """True on the branch m <= -1 - (q-p)/2, where the inner residues contribute."""
    return 2 * m <= -2 - (q - p)


def upq_term(logs: np.ndarray, p: int, m: int, c: int) -> complex:
    """h_c^{-m+p-1} prod h^{1/2} / prod_{i != c}(h_c - h_i), c 0-based."""
    h = np.exp(logs)
    den = np.prod([h[c] - h[i] for i in range(len(h)) if i != c])
    return complex(np.exp((-m + p - 1) * logs[c] + 0.5 * logs.sum()) / den)


def upq_closed_form(logs: np.ndarray, p: int, q: int, m: int, inner, outer) -> complex:
    """Residue sum for the U(p,q) lift; ``inner``/``outer`` are 1-based position sets."""
    if upq_holomorphic_side(p, q, m):
        return -sum((upq_term(logs, p, m, c - 1) for c in sorted(inner)), 0j)
    return sum((upq_term(logs, p, m, c - 1) for c in sorted(outer)), 0j)


def _normalize_upq(spec: CharacterSpec, point: CoveredTorusPoint) -> tuple[int, int, CoveredTorusPoint]:
    if spec.kind != "lift_upq":
        raise DomainError(f"theta_upq needs a lift_upq spec, got {spec.kind}")
    p, q = spec.shape
    if (point.p, point.q) != (p, q) or point.layout != "standard":
        raise DomainError(f"point is not a standard U({p},{q}) point")
    if point.t != spec.label.t:
        raise RangeError(f"point has t={point.t}, spec has t={spec.label.t}")
    if p > q:
        point = point.swapped()
        p, q = q, p
    return p, q, point


def theta_upq(spec: CharacterSpec, point: CoveredTorusPoint, tol: float = COINCIDENCE_TOL) -> NormalizedValue:
    p, q, point = _normalize_upq(spec, point)
    require_regular(point, tol)
    inner, outer = contour_sides(point, tol)
    return NormalizedValue(upq_closed_form(point.log_entries(), p, q, spec.m, inner, outer))


def theta_u11_cases(m: int, theta: float, X: float) -> complex:
    """U(1,1) value written out case by case in (theta, X), t = 1."""
    if X == 0:
        raise RegularityError("non-regular point: X = 0")
    den = math.exp(X) - math.exp(-X)
    if m <= -1:
        if X > 0:
            return cmath.exp(-m * (1j * theta - X)) / den
        return -cmath.exp(-m * (1j * theta + X)) / den
    if X > 0:
        return cmath.exp(-m * (1j * theta + X)) / den
    return -cmath.exp(-m * (1j * theta - X)) / den


# --- U(n, n+1) double lift -------------------------------------------------


def _require_unn1_point(spec: CharacterSpec, point: CoveredTorusPoint) -> int:
    if spec.kind != "double_lift_unn1":
        raise DomainError(f"expected a double_lift_unn1 spec, got {spec.kind}")
    n = spec.shape[0]
    if (point.p, point.q, point.layout) != (n, n + 1, "mirrored"):
        raise DomainError(f"point is not a U({n},{n + 1}) point")
    if point.t != spec.label.t:
        raise RangeError(f"point has t={point.t}, spec has t={spec.label.t}")
    return n


def omega(n: int, i: int, j: int, point: CoveredTorusPoint, tol: float = COINCIDENCE_TOL) -> complex:
    logs = point.log_entries()
    if logs.size != 2 * n + 1:
        raise RangeError(f"expected {2 * n + 1} coordinates, got {logs.size}")
    if i == j or not (1 <= i <= logs.size and 1 <= j <= logs.size):
        raise RangeError(f"invalid index pair ({i}, {j})")
    check_regular_entries(np.exp(logs), tol)
    return _kernels.omega_sum(logs, np.array([i - 1]), np.array([j - 1]), 0.0, 0.0)


def lift_pair_exponents(n: int, m: int) -> tuple[int, int]:
    """Powers of h_i and h_j multiplying Omega_ij in the double-lift sum."""
    if m <= -1:
        return n + m, n
    if m == 0:
        return n, n
    return n, n + m


def lift_index_routing(m: int, inner, outer) -> tuple[list[int], list[int], int]:
    """(left indices, right indices, sign) of the Omega-sum, 1-based.

    A pair (i, j) survives the residue evaluation only when each index sits
    on the side of the unit circle its contour integral picks up.
    """
    if m >= 1:
        return sorted(outer), sorted(inner), -1
    return sorted(outer), sorted(outer), 1


def lift_omega_part(n: int, m: int, logs: np.ndarray, inner, outer) -> complex:
    left, right, sign = lift_index_routing(m, inner, outer)
    a, b = lift_pair_exponents(n, m)
    left0 = np.array([i - 1 for i in left], dtype=np.int64)
    right0 = np.array([j - 1 for j in right], dtype=np.int64)
    return sign * _kernels.omega_sum(logs, left0, right0, float(a), float(b))


def lift_omega_scale(n: int, m: int, point: CoveredTorusPoint, tol: float = COINCIDENCE_TOL) -> float:
    """Sum of |terms| of the Omega-sum; the yardstick when the sum itself cancels."""
    inner, outer = contour_sides(point, tol)
    left, right, _ = lift_index_routing(m, inner, outer)
    a, b = lift_pair_exponents(n, m)
    logs = point.log_entries()
    return sum(
        abs(_kernels.omega_sum(logs, np.array([i - 1]), np.array([j - 1]), float(a), float(b)))
        for i in left for j in right if i != j
    )


def sigma_denominator_product(h: np.ndarray) -> complex:
    """prod_{k=2}^{2n}(1 - h_1/h_k) prod_{k=2}^{2n}(1 - h_k/h_{2n+1})."""
    return complex(_kernels.chamber_products(np.asarray(h, dtype=complex)[None, :])[0])


def sigma_term(n: int, m: int, point: CoveredTorusPoint, tol: float = COINCIDENCE_TOL) -> complex:
    """Boundary term Sigma(h) times its m-dependent exponential prefactor."""
    if point.t < 1:
        raise DomainError("the boundary term needs t >= 1")
    if point.dim != 2 * n + 1 or point.layout != "mirrored":
        raise DomainError(f"expected a U({n},{n + 1}) point")
    X1 = point.coords[0]
    Y = point.coords[2 * n]
    if abs(Y) <= tol:
        raise RegularityError(f"non-regular point: X{2 * n + 1} is zero")
    require_regular(point, tol)
    sgn = 1.0 if Y > 0 else -1.0
    h = point.entries()
    num = sgn * cmath.exp(1j * m * X1) * abs(math.exp((2 * n - 2) * Y)) * (1 - math.exp(-2 * Y))
    den = abs(sigma_denominator_product(h)) * abs(1 - math.exp(-2 * Y)) ** 2
    if m >= 0:
        pref = math.exp(-(m + 1) * sgn * Y)
    else:
        pref = math.exp((m - 1) * sgn * Y)
    return pref * num / den


def theta_lift_parts(spec: CharacterSpec, point: CoveredTorusPoint, tol: float = COINCIDENCE_TOL) -> tuple[complex, complex]:
    """(Omega-part, boundary part) before the normalization constants are applied."""
    n = _require_unn1_point(spec, point)
    require_regular(point, tol)
    inner, outer = contour_sides(point, tol)
    main = lift_omega_part(n, spec.m, point.log_entries(), inner, outer)
    boundary = sigma_term(n, spec.m, point, tol) if point.t >= 1 else 0j
    return main, boundary


def theta_lift_unn1(
    spec: CharacterSpec,
    point: CoveredTorusPoint,
    constants: NormalizationConstants = NormalizationConstants(),
    tol: float = COINCIDENCE_TOL,
) -> NormalizedValue:
    main, boundary = theta_lift_parts(spec, point, tol)
    delta = 0 if point.t == 0 else 1
    value = constants.overall * (constants.a_tilde * main + delta * constants.b * boundary)
    return NormalizedValue(complex(value))


# --- epsilon character ------------------------------------------------------


def _realify(g: np.ndarray) -> np.ndarray:
    g = np.asarray(g)
    if not np.iscomplexobj(g) or np.all(g.imag == 0):
        return np.asarray(g.real if np.iscomplexobj(g) else g, dtype=float)
    return np.block([[g.real, -g.imag], [g.imag, g.real]])


def theta_squared(gX: np.ndarray) -> complex:
    """det(g)^{-1} det((c(g)+1)/2)^2 with c(g) = (g+1)(g-1)^{-1}, on the real form of g."""
    g = _realify(gX)
    ident = np.eye(g.shape[0])
    shifted = g - ident
    if abs(np.linalg.det(shifted)) < 1e-12 * max(1.0, np.linalg.norm(g)) ** g.shape[0]:
        raise CayleyDomainError("det(g - 1) = 0: element outside the Cayley domain")
    cg = (g + ident) @ np.linalg.inv(shifted)
    return complex(np.linalg.det(0.5 * (cg + ident)) ** 2 / np.linalg.det(g))


def epsilon_character(gX: np.ndarray, sheet: int = 0) -> complex:
    if sheet not in (0, 1):
        raise ValueError("sheet must be 0 or 1")
    root = cmath.sqrt(theta_squared(gX))
    if sheet == 1:
        root = -root
    return root / abs(root)
