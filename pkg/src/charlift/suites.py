"""Verification cases behind ``charlift verify``.

Each case is a zero-argument callable returning (error, tolerance, detail).
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .cartan import (
    CoveredTorusPoint,
    cayley_transform,
    embed_in_group,
    signature_matrix,
    torus_matrix,
)
from .characters import CharacterSpec, epsilon_character, theta_upq
from .oracles import (
    QuadratureParams,
    chamber_sign_scan,
    contour_unit_circle_moment,
    moment_closed_form,
    random_regular_point,
    verify_theta_lift,
    verify_theta_upq,
)
from .rootsys import (
    build_root_datum,
    delta_quotient,
    permutations_with_ends,
    permuted_weyl_quotient,
    weyl_denominator,
)

CONTOUR_GRID = [(k, a) for k in (-2, 0, 3) for a in (0.3, 0.5 + 0.5j, 2.0)]
UPQ_SHAPES = [(1, 1), (1, 2), (2, 2)]
UPQ_WEIGHTS = (-3, 0, 2)
LIFT_WEIGHTS = (-2, 0, 3)


def _rel(a: complex, b: complex) -> float:
    return abs(a - b) / abs(b) if b != 0 else abs(a)


def contour_cases(cfg, params):
    for k, a in CONTOUR_GRID:
        def run(k=k, a=a):
            err = abs(contour_unit_circle_moment(k, a, params) - moment_closed_form(k, a))
            return err, 1e-10, ""
        yield f"k={k},a={a}", run


def upq_cases(cfg, params):
    shapes = [(cfg.p, cfg.q)] if cfg.p is not None and cfg.q is not None else UPQ_SHAPES
    weights = [cfg.m] if cfg.m is not None else UPQ_WEIGHTS
    for p, q in shapes:
        ts = [cfg.t] if cfg.t is not None else range(min(p, q) + 1)
        for t, m in itertools.product(ts, weights):
            def run(p=p, q=q, t=t, m=m):
                rng = np.random.default_rng([cfg.seed, p, q, t, m + 100])
                worst, detail = 0.0, ""
                for _ in range(cfg.points):
                    rep = verify_theta_upq(p, q, m, t, random_regular_point(p, q, t, rng), params)
                    worst = max(worst, rep.relative_error)
                    detail = detail or rep.detail
                return worst, 1e-5, detail
            yield f"p={p},q={q},t={t},m={m}", run


def lift_cases(cfg, params):
    ns = [cfg.n] if cfg.n is not None else (1, 2)
    weights = [cfg.m] if cfg.m is not None else LIFT_WEIGHTS
    for n in ns:
        ts = [cfg.t] if cfg.t is not None else range(n + 1)
        for t, m in itertools.product(ts, weights):
            def run(n=n, t=t, m=m):
                rng = np.random.default_rng([cfg.seed, n, t, m + 100])
                worst, detail = 0.0, ""
                for _ in range(cfg.points):
                    pt = random_regular_point(n, n + 1, t, rng, "mirrored")
                    rep = verify_theta_lift(n, m, t, pt, params)
                    worst = max(worst, rep.relative_error)
                    detail = detail or rep.detail
                return worst, 1e-4, detail
            yield f"n={n},t={t},m={m}", run


def chamber_cases(cfg, params):
    ns = [cfg.n] if cfg.n is not None else (1, 2, 3)
    for n in ns:
        ts = [cfg.t] if cfg.t is not None else range(1, n + 1)
        for t in ts:
            def run(n=n, t=t):
                reports = chamber_sign_scan(n, t, cfg.samples, cfg.seed)
                violations = sum(r.violations for r in reports)
                return float(violations), 0.0, f"{len(reports)} chambers"
            yield f"n={n},t={t}", run


# --- structural invariants ---------------------------------------------------


def weyl_invariance_error(p: int, q: int, m: int, rng, trials: int = 20) -> float:
    spec = CharacterSpec.upq(p, q, m, 0)
    base_pt = random_regular_point(p, q, 0, rng)
    base = theta_upq(spec, base_pt).value
    worst = 0.0
    for _ in range(trials):
        perm = list(rng.permutation(p)) + [p + k for k in rng.permutation(q)]
        moved = base_pt.with_coords([base_pt.coords[k] for k in perm])
        worst = max(worst, _rel(theta_upq(spec, moved).value, base))
    return worst


def sigma_independence_error(n: int, rng, points: int = 10) -> float:
    worst = 0.0
    size = 2 * n + 1
    for _ in range(points):
        pt = random_regular_point(n, n + 1, 0, rng, "mirrored")
        for i, j in itertools.permutations(range(size), 2):
            target = delta_quotient(n, i + 1, j + 1, pt).value
            for sigma in permutations_with_ends(size, i, j):
                worst = max(worst, _rel(permuted_weyl_quotient(n, sigma, pt), target))
    return worst


def cover_invariance_error(p: int, q: int, rng) -> float:
    datum = build_root_datum(p, q)
    pt = random_regular_point(p, q, 0, rng)
    shifted = list(pt.coords)
    shifted[0] += 2 * math.pi
    shifted[-1] -= 2 * math.pi
    a = weyl_denominator(datum, "psi", pt)
    b = weyl_denominator(datum, "psi", pt.with_coords(shifted))
    return _rel(b, a)


def cayley_errors(p: int, q: int, t: int, rng, points: int = 100) -> tuple[float, float]:
    """(worst off-diagonal residual, worst isometry residual)."""
    J = signature_matrix(p, q)
    off, iso = 0.0, 0.0
    for _ in range(points):
        pt = random_regular_point(p, q, t, rng, min_gap=0.0, hyper_range=(0.05, 2.0))
        c = cayley_transform(pt.pairs(), pt.dim, p)
        g = embed_in_group(pt)
        back = np.linalg.inv(c) @ g @ c
        off = max(off, float(np.linalg.norm(back - torus_matrix(pt))))
        iso = max(iso, float(np.linalg.norm(g.conj().T @ J @ g - J)))
    return off, iso


def random_unitary(dim: int, rng) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    qmat, r = np.linalg.qr(z)
    return qmat * (np.diag(r) / np.abs(np.diag(r)))


def epsilon_errors(rng, samples: int = 1000) -> tuple[float, float]:
    """Distance of eps to {+-1} on unitary blocks and to {+-1, +-i} on general real blocks."""
    signs = np.array([1, -1])
    fourth = np.array([1, -1, 1j, -1j])
    worst_u, worst_g = 0.0, 0.0
    for _ in range(samples):
        dim = int(rng.integers(1, 4))
        u = random_unitary(dim, rng)
        eps = epsilon_character(u, int(rng.integers(0, 2)))
        worst_u = max(worst_u, float(np.min(np.abs(eps - signs))))
        g = rng.normal(size=(dim + 1, dim + 1))
        eps = epsilon_character(g, int(rng.integers(0, 2)))
        worst_g = max(worst_g, float(np.min(np.abs(eps - fourth))))
    return worst_u, worst_g


def invariant_cases(cfg, params):
    def rng(tag):
        return np.random.default_rng([cfg.seed, tag])

    for p, q in ((1, 2), (2, 2)):
        yield f"weyl-invariance p={p},q={q}", (lambda p=p, q=q: (max(weyl_invariance_error(p, q, m, rng(p * 10 + q)) for m in UPQ_WEIGHTS), 1e-12, ""))
    for n in (1, 2):
        yield f"sigma-independence n={n}", (lambda n=n: (sigma_independence_error(n, rng(n), 10 if n == 1 else 2), 1e-12, ""))
    yield "cover-invariance", (lambda: (max(cover_invariance_error(p, q, rng(7)) for p, q in UPQ_SHAPES), 1e-12, ""))
    yield "cayley-consistency", (lambda: (max(max(cayley_errors(p, q, t, rng(11), 20))
                                          for p in range(1, 4) for q in range(1, 5 - p + 1) for t in range(min(p, q) + 1)), 1e-12, ""))
    yield "epsilon-character", (lambda: (max(epsilon_errors(rng(13), 200)), 1e-9, ""))


BUILDERS = {
    "contour": contour_cases,
    "upq": upq_cases,
    "lift": lift_cases,
    "chambers": chamber_cases,
    "invariants": invariant_cases,
}


def build(suite: str, cfg, params: QuadratureParams):
    return list(BUILDERS[suite](cfg, params))
