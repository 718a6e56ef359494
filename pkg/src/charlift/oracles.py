"""Numerical oracles that never touch the closed-form residue bookkeeping.

The U(p,q) and U(n,n+1) oracles sum over the Weyl group, weight each term
with a permuted Weyl-denominator quotient, and evaluate the remaining
contour integrals by trapezoid quadrature on the unit circle at radii
r -> 1 from the side each index demands. The r -> 1 limit is taken by
polynomial extrapolation in (1 - r).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable

import numpy as np

from . import _kernels
from .cartan import CoveredTorusPoint, chamber_id, format_chamber, is_regular, require_regular
from .characters import (
    CharacterSpec,
    lift_omega_scale,
    sigma_denominator_product,
    theta_lift_parts,
    theta_upq,
)
from .errors import PoleOnContourError, QuadratureGuardError, RangeError
from .rootsys import permutation_sign, weyl_denominator_logs

FROM_INSIDE = "from_inside"
FROM_OUTSIDE = "from_outside"
FREE = "free"

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


@dataclass(frozen=True)
class QuadratureParams:
    nodes: int = 4096
    r_sequence: tuple[float, ...] = tuple(2.0 ** -k for k in range(4, 11))
    extrapolation: str = "richardson"
    tolerance: float = 1e-5
    guard: float = 32.0

    def __post_init__(self):
        object.__setattr__(self, "r_sequence", tuple(float(d) for d in self.r_sequence))
        if self.nodes < 64 or self.nodes & (self.nodes - 1):
            raise RangeError(f"nodes must be a power of two >= 64, got {self.nodes}")
        if not self.r_sequence or any(not 0.0 < d < 1.0 for d in self.r_sequence):
            raise RangeError("r_sequence holds offsets |1 - r| in (0, 1)")
        if self.extrapolation not in ("none", "richardson"):
            raise ValueError(f"unknown extrapolation {self.extrapolation!r}")

    def radii(self, direction: str) -> list[float]:
        if direction == FROM_INSIDE:
            return [1.0 - d for d in self.r_sequence]
        if direction == FROM_OUTSIDE:
            return [1.0 + d for d in self.r_sequence]
        return [1.0]


@dataclass
class VerificationReport:
    closed_form: complex
    numeric: complex
    calibration: complex
    relative_error: float
    params: dict
    passed: bool
    detail: str = ""
    extras: dict = field(default_factory=dict)

    @property
    def pass_(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        return {
            "closed_form": [self.closed_form.real, self.closed_form.imag],
            "numeric": [self.numeric.real, self.numeric.imag],
            "calibration": [self.calibration.real, self.calibration.imag],
            "relative_error": self.relative_error,
            "pass": self.passed,
            "detail": self.detail,
            "params": self.params,
        }


class DivergenceError(Exception):
    pass


# --- contour quadrature ------------------------------------------------------


def min_node_distance(a: complex, nodes: int) -> float:
    """Distance from ``a`` to the nearest quadrature node on the unit circle."""
    phase = math.atan2(a.imag, a.real) % (2 * math.pi)
    step = 2 * math.pi / nodes
    near = [math.floor(phase / step), math.ceil(phase / step)]
    return min(abs(a - complex(math.cos(k * step), math.sin(k * step))) for k in near)


def contour_unit_circle_moment(k: int, a: complex, params: QuadratureParams = QuadratureParams()) -> complex:
    """(1/2 pi i) of the contour integral of z^k/(z - a) over the unit circle, by trapezoid rule."""
    a = complex(a)
    if a == 0:
        raise PoleOnContourError("a = 0 is excluded")
    if abs(abs(a) - 1.0) < 1e-12:
        raise PoleOnContourError(f"|a| = 1 (a = {a})")
    if min_node_distance(a, params.nodes) < params.guard / params.nodes:
        raise QuadratureGuardError(f"pole {a} too close to the {params.nodes} quadrature nodes")
    return _kernels.trapezoid_moment(int(k), a, int(params.nodes))


def moment_closed_form(k: int, a: complex) -> complex:
    if k >= 0 and abs(a) < 1:
        return a ** k
    if k < 0 and abs(a) > 1:
        return -(a ** k)
    return 0j


def richardson(xs: list[float], ys: list[complex]) -> tuple[complex, float]:
    """Neville tableau extrapolation of y(x) to x = 0; returns (value, error estimate)."""
    n = len(xs)
    table = [list(ys)]
    for level in range(1, n):
        prev = table[-1]
        row = []
        for i in range(n - level):
            x0, x1 = xs[i], xs[i + level]
            row.append((x0 * prev[i + 1] - x1 * prev[i]) / (x0 - x1))
        table.append(row)
    best = table[-1][0]
    err = abs(best - table[-2][0]) if n > 1 else float("inf")
    return best, err


def directional_limit(k: int, h: complex, direction: str, params: QuadratureParams) -> tuple[complex, dict]:
    """lim (r h) * M(k, r h) as r -> 1 from ``direction``, M the contour moment."""
    if direction == FREE:
        val = h * contour_unit_circle_moment(k, h, params)
        return val, {"radii": [1.0], "error_estimate": 0.0}
    xs, ys = [], []
    for r in params.radii(direction):
        a = r * h
        try:
            ys.append(a * contour_unit_circle_moment(k, a, params))
        except QuadratureGuardError:
            continue
        # outside radii are measured in the inverted coordinate 1/r, which
        # mirrors the inside case under z -> 1/z
        xs.append(1.0 - r if r < 1.0 else 1.0 - 1.0 / r)
    if not ys:
        raise DivergenceError(f"every radius rejected by the near-pole guard for h={h}")
    if params.extrapolation == "none" or len(ys) == 1:
        return ys[-1], {"radii": xs, "error_estimate": float("nan")}
    diffs = [abs(ys[i + 1] - ys[i]) for i in range(len(ys) - 1)]
    scale = max(abs(y) for y in ys)
    # growth below the aliasing floor exp(-nodes*|1-r|) is noise, not divergence
    if len(diffs) >= 2 and diffs[-1] > diffs[0] and diffs[-1] > 1e-6 * max(scale, 1.0):
        raise DivergenceError(f"sequence diverges along the radii for h={h}: {diffs}")
    val, err = richardson(xs, ys)
    return val, {"radii": xs, "error_estimate": err}


def limit_direction(i: int, point: CoveredTorusPoint) -> str:
    require_regular(point)
    if not 1 <= i <= point.dim:
        raise RangeError(f"index {i} outside 1..{point.dim}")
    in_s = any(i in pair for pair in point.pairs())
    if in_s:
        return FREE
    return FROM_INSIDE if i <= point.p else FROM_OUTSIDE


# --- reference points and calibration -----------------------------------------


def reference_point(p: int, q: int, t: int, layout: str = "standard") -> CoveredTorusPoint:
    """A fixed, well-separated regular point for calibration.

    Golden-angle spacing keeps the angles irregular; equally spaced angles
    make several closed forms cancel to zero.
    """
    coords = [0.0] * (p + q)
    probe = CoveredTorusPoint(p, q, t, tuple(coords), layout)
    hyper = {b for _, b in probe.pairs()}
    angle_slots = [k for k in range(1, p + q + 1) if k not in hyper]
    for idx, k in enumerate(angle_slots):
        coords[k - 1] = 0.37 + GOLDEN_ANGLE * idx
    for idx, b in enumerate(sorted(hyper)):
        coords[b - 1] = 0.45 + 0.35 * idx
    return probe.with_coords(coords)


def random_regular_point(
    p: int, q: int, t: int, rng: np.random.Generator, layout: str = "standard",
    min_gap: float = 0.25, hyper_range: tuple[float, float] = (0.3, 1.5),
) -> CoveredTorusPoint:
    """Random point whose compact angles are at least ``min_gap`` apart and whose hyperbolic parts are bounded away from 0."""
    probe = CoveredTorusPoint(p, q, t, (0.0,) * (p + q), layout)
    hyper = [b for _, b in probe.pairs()]
    while True:
        coords = rng.uniform(0.0, 2.0 * math.pi, size=p + q)
        for b in hyper:
            coords[b - 1] = rng.choice([-1.0, 1.0]) * rng.uniform(*hyper_range)
        point = probe.with_coords(coords)
        compact = [point.coords[c - 1] for c in point.compact_positions()]
        if _angles_separated(compact, min_gap) and is_regular(point):
            return point


def _angles_separated(angles: Iterable[float], gap: float) -> bool:
    a = sorted(x % (2 * math.pi) for x in angles)
    if len(a) < 2:
        return True
    steps = [a[i + 1] - a[i] for i in range(len(a) - 1)] + [a[0] + 2 * math.pi - a[-1]]
    return min(steps) >= gap


def _relative_error(a: complex, b: complex) -> float:
    if b == 0:
        return abs(a)
    return abs(a - b) / abs(b)


# --- U(p,q) oracle -----------------------------------------------------------


def upq_contour_exponent(p: int, q: int, m: int) -> int:
    """Integer power of h in the U(1) integrand, half-power absorbed when p+q is odd."""
    return -m - 1 - (q - p + 1) // 2


def upq_oracle_value(
    p: int, q: int, m: int, point: CoveredTorusPoint, params: QuadratureParams,
    directions: dict[int, str] | None = None,
) -> tuple[complex, dict]:
    """Sum over sigma in S_{p+q} of the Weyl quotient times the radial-limit contour integral."""
    require_regular(point)
    logs = point.log_entries()
    N = p + q
    k = upq_contour_exponent(p, q, m)
    base = weyl_denominator_logs(logs, "phi")
    odd = N % 2 == 1
    limits: dict[int, complex] = {}
    meta: dict[int, dict] = {}
    for j in range(N):
        direction = (directions or {}).get(j + 1) or limit_direction(j + 1, point)
        limits[j], meta[j] = directional_limit(k, complex(np.exp(logs[j])), direction, params)
    total = 0j
    for sigma in itertools.permutations(range(N)):
        moved = logs[list(sigma)]
        inner = weyl_denominator_logs(moved[1:], "phi") if N > 2 else 1.0 + 0j
        ratio = permutation_sign(sigma) * inner / base
        if odd:
            ratio *= np.exp(0.5 * logs[sigma[0]])
        total += ratio * -limits[sigma[0]]
    err = max(m_["error_estimate"] for m_ in meta.values())
    return complex(total), {"k": k, "extrapolation_error": err}


_UPQ_CAL: dict = {}


def _upq_calibration(p: int, q: int, m: int, t: int, params: QuadratureParams) -> complex:
    key = (p, q, m, t, params)
    if key not in _UPQ_CAL:
        ref = reference_point(p, q, t)
        closed = theta_upq(CharacterSpec.upq(p, q, m, t), ref).value
        numeric, _ = upq_oracle_value(p, q, m, ref, params)
        _UPQ_CAL[key] = closed / numeric
    return _UPQ_CAL[key]


def verify_theta_upq(
    p: int, q: int, m: int, t: int, point: CoveredTorusPoint,
    params: QuadratureParams = QuadratureParams(),
    calibration_point: CoveredTorusPoint | None = None,
    directions: dict[int, str] | None = None,
) -> VerificationReport:
    if p + q > 4:
        raise RangeError("the U(p,q) oracle is limited to p+q <= 4")
    if p > q:
        point, p, q = point.swapped(), q, p
    echo = {"nodes": params.nodes, "r_sequence": list(params.r_sequence),
            "extrapolation": params.extrapolation, "tolerance": params.tolerance}
    closed = theta_upq(CharacterSpec.upq(p, q, m, t), point).value
    try:
        numeric, meta = upq_oracle_value(p, q, m, point, params, directions)
        if calibration_point is None:
            cal = _upq_calibration(p, q, m, t, params)
        else:
            ref_closed = theta_upq(CharacterSpec.upq(p, q, m, t), calibration_point).value
            cal = ref_closed / upq_oracle_value(p, q, m, calibration_point, params)[0]
    except DivergenceError as exc:
        return VerificationReport(closed, complex("nan"), complex("nan"), float("inf"), echo, False, f"divergence: {exc}")
    rel = _relative_error(cal * numeric, closed)
    return VerificationReport(closed, numeric, cal, rel, echo, rel <= params.tolerance, extras=meta)


# --- U(n, n+1) oracle --------------------------------------------------------


def lift_contour_exponents(m: int) -> tuple[int, int]:
    """Powers of the two U(1,1) variables left after conjugating the seed character."""
    if m >= 1:
        return -1, m - 1
    if m == 0:
        return -1, -1
    return m - 1, -1


def pair_weights(n: int, point: CoveredTorusPoint) -> dict[tuple[int, int], complex]:
    """h_i h_j Delta(i,j) for every ordered pair, Delta from the Weyl-group sum.

    All sigma sharing sigma(1), sigma(2n+1) are summed; each contributes the
    same quotient, so the sum is (2n-1)! Delta(i,j).
    """
    logs = point.log_entries()
    N = 2 * n + 1
    base = weyl_denominator_logs(logs, "phi")
    out: dict[tuple[int, int], complex] = {}
    for sigma in itertools.permutations(range(N)):
        moved = logs[list(sigma)]
        inner = weyl_denominator_logs(moved[1:-1], "phi") if N > 3 else 1.0 + 0j
        key = (sigma[0], sigma[-1])
        out[key] = out.get(key, 0j) + permutation_sign(sigma) * inner / base
    return {key: val * np.exp(logs[key[0]] + logs[key[1]]) for key, val in out.items()}


def lift_oracle_value(
    n: int, m: int, point: CoveredTorusPoint, params: QuadratureParams,
    directions: dict[int, str] | None = None,
) -> tuple[complex, dict]:
    require_regular(point)
    logs = point.log_entries()
    N = 2 * n + 1
    k1, k2 = lift_contour_exponents(m)
    weights = pair_weights(n, point)
    cache: dict[tuple[int, int], complex] = {}
    errs = []

    def factor(idx: int, k: int) -> complex:
        if (idx, k) not in cache:
            direction = (directions or {}).get(idx + 1) or limit_direction(idx + 1, point)
            h = complex(np.exp(logs[idx]))
            # (r h) M(k, r h) tends to the same limit as M times the unscaled h
            val, meta = directional_limit(k, h, direction, params)
            cache[(idx, k)] = val / h
            errs.append(meta["error_estimate"])
        return cache[(idx, k)]

    total = 0j
    scale = 0.0
    for i in range(N):
        for j in range(N):
            if i != j:
                term = weights[(i, j)] * factor(i, k1) * factor(j, k2)
                total += term
                scale += abs(term)
    return complex(total), {"k": (k1, k2), "scale": scale, "extrapolation_error": max(errs) if errs else 0.0}


_LIFT_CAL: dict = {}

# The Omega-sum cancels to zero identically for m = 0 (antisymmetry of
# Omega_ij) and for n = 1, t = 0, m >= 1. Calibrating against zero is
# meaningless, so those cases check that the oracle cancels too.
VANISHING = 1e-9


def _lift_reference_points(n: int, t: int) -> list[CoveredTorusPoint]:
    first = reference_point(n, n + 1, t, "mirrored")
    if t == 0:
        return [first]
    second = list(first.coords)
    second[2 * n] = -0.8  # opposite sign of the boundary coordinate
    second[0] += 0.9
    return [first, first.with_coords(second)]


def _lift_calibration(n: int, m: int, t: int, params: QuadratureParams) -> tuple[complex, complex, bool]:
    """(Omega-part constant, boundary constant, Omega-part vanishes identically)."""
    key = (n, m, t, params)
    if key in _LIFT_CAL:
        return _LIFT_CAL[key]
    spec = CharacterSpec.unn1(n, m, t)
    refs = _lift_reference_points(n, t)
    parts = [theta_lift_parts(spec, ref) for ref in refs]
    oracle = [lift_oracle_value(n, m, ref, params) for ref in refs]
    vanishing = all(abs(num) <= VANISHING * meta["scale"] for num, meta in oracle)
    if vanishing:
        a = 0j
        b = 0j if t == 0 else (parts[0][0] + parts[0][1]) / parts[0][1]
    elif t == 0:
        a, b = parts[0][0] / oracle[0][0], 0j
    else:
        # closed = a * oracle + b * boundary, solved exactly at the two references
        rows = [[num, boundary] for (num, _), (_, boundary) in zip(oracle, parts)]
        rhs = [main + boundary for main, boundary in parts]
        a, b = (complex(x) for x in np.linalg.solve(np.array(rows, dtype=complex), np.array(rhs, dtype=complex)))
    _LIFT_CAL[key] = (complex(a), complex(b), vanishing)
    return _LIFT_CAL[key]


def verify_theta_lift(
    n: int, m: int, t: int, point: CoveredTorusPoint,
    params: QuadratureParams = QuadratureParams(tolerance=1e-4),
    directions: dict[int, str] | None = None,
) -> VerificationReport:
    """Compare the double-lift closed form against the double-contour oracle.

    The closed form is taken with unit constants. For t >= 1 the oracle side
    is ``a * oracle + b * Sigma-term`` with (a, b) fitted at two reference
    points of opposite boundary sign.
    """
    if n > 2:
        raise RangeError("the double-lift oracle is limited to n <= 2")
    if not 0 <= t <= n:
        raise RangeError(f"t={t} outside [0, {n}]")
    spec = CharacterSpec.unn1(n, m, t)
    echo = {"nodes": params.nodes, "r_sequence": list(params.r_sequence),
            "extrapolation": params.extrapolation, "tolerance": params.tolerance}
    main, boundary = theta_lift_parts(spec, point)
    closed = main + boundary
    try:
        numeric, meta = lift_oracle_value(n, m, point, params, directions)
        cal, cal_b, vanishing = _lift_calibration(n, m, t, params)
    except DivergenceError as exc:
        return VerificationReport(closed, complex("nan"), complex("nan"), float("inf"), echo, False, f"divergence: {exc}")
    meta = dict(meta, boundary_calibration=cal_b, vanishing=vanishing)
    if vanishing:
        # both sides of the Omega-part must cancel; the boundary term is compared directly
        main_scale = lift_omega_scale(n, m, point)
        rel = max(abs(numeric) / meta["scale"], abs(main) / main_scale)
        if t >= 1:
            rel = max(rel, _relative_error(cal_b * boundary, closed))
        detail = "Omega-part vanishes identically"
    else:
        rel = _relative_error(cal * numeric + cal_b * boundary, closed)
        detail = ""
    return VerificationReport(closed, numeric, cal, rel, echo, rel <= params.tolerance, detail, meta)


# --- chamber sign scan -------------------------------------------------------


@dataclass
class ChamberReport:
    chamber: str
    samples: int
    resampled: int
    sign: int
    max_imag_ratio: float
    violations: int

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return dict(asdict(self), passed=self.passed)


def enumerate_chambers(n: int, t: int) -> list[tuple[str, tuple[int, ...]]]:
    probe = CoveredTorusPoint.unn1(n, t, (0.0,) * (2 * n + 1))
    compact = probe.compact_positions()
    out = []
    for signs in itertools.product("+-", repeat=t):
        if len(compact) <= 2:
            orders = [tuple(compact)]
        else:
            head, rest = compact[0], compact[1:]
            orders = [(head, *perm) for perm in itertools.permutations(rest)]
        for order in orders:
            out.append(("".join(signs), order))
    return out


def _sample_in_chamber(n, t, cid, rng, box):
    signs, order = cid
    probe = CoveredTorusPoint.unn1(n, t, (0.0,) * (2 * n + 1))
    coords = rng.uniform(-box, box, size=2 * n + 1)
    for (a, b), s in zip(probe.pairs(), signs):
        coords[b - 1] = (1.0 if s == "+" else -1.0) * rng.uniform(1e-3, box)
    if order:
        angles = np.sort(rng.uniform(0.0, 2 * math.pi, size=len(order)))
        shift = rng.integers(-2, 3, size=len(order)) * 2 * math.pi  # different sheets, same chamber
        for pos, ang, sh in zip(order, angles, shift):
            coords[pos - 1] = ang + sh
    return probe.with_coords(coords)


def chamber_sign_scan(n: int, t: int, samples_per_chamber: int = 1000, seed: int = 0, box: float = 3.0) -> list[ChamberReport]:
    if n < 1:
        raise RangeError("n must be >= 1")
    if t == 0:
        return []
    if not 1 <= t <= n:
        raise RangeError(f"t={t} outside [1, {n}]")
    rng = np.random.default_rng(seed)
    reports = []
    for cid in enumerate_chambers(n, t):
        pts, resampled = [], 0
        while len(pts) < samples_per_chamber:
            pt = _sample_in_chamber(n, t, cid, rng, box)
            if not is_regular(pt, 1e-6):
                resampled += 1
                continue
            assert chamber_id(pt) == cid
            pts.append(pt.entries())
        values = _kernels.chamber_products(np.array(pts))
        ratio = np.abs(values.imag) / np.abs(values)
        signs = np.sign(values.real)
        sign = int(signs[0])
        violations = int(np.sum(ratio >= 1e-10) + np.sum(signs != sign))
        reports.append(ChamberReport(format_chamber(cid), samples_per_chamber, resampled, sign, float(ratio.max()), violations))
    return reports


__all__ = [
    "QuadratureParams", "VerificationReport", "ChamberReport", "DivergenceError",
    "FROM_INSIDE", "FROM_OUTSIDE", "FREE",
    "contour_unit_circle_moment", "moment_closed_form", "richardson", "directional_limit",
    "limit_direction", "verify_theta_upq", "verify_theta_lift", "chamber_sign_scan",
    "reference_point", "random_regular_point", "sigma_denominator_product",
]
