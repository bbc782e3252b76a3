"""Scans of norm ratios and phi-functionals over Gamma^s and over body directions."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import densities as dens
from .gamma_moments import cumulant_cos_sin, moment_cos_sin, subfactorial

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
DEFAULT_GRID = 1001
S_TOL = 1e-9
DIRECTION_TOL = 1e-6


@dataclass
class ScanReport:
    grid: list
    values: list
    argmax: object
    max_value: float
    claim: str
    metadata: dict = field(default_factory=dict)
    errors: Optional[list] = None
    extra: dict = field(default_factory=dict)
    points: Optional[list] = None  # direction vectors when grid holds indices

    @property
    def argmax_index(self) -> int:
        return int(np.argmax(self.values))

    def to_dict(self) -> dict:
        out = {
            "claim": self.claim,
            "argmax": _jsonable(self.argmax),
            "max_value": float(self.max_value),
            "metadata": _jsonable(self.metadata),
            "extra": _jsonable(self.extra),
            "grid": _jsonable(self.grid),
            "values": [float(v) for v in self.values],
        }
        if self.errors is not None:
            out["errors"] = [float(e) for e in self.errors]
        if self.points is not None:
            out["points"] = _jsonable(self.points)
        return out

    def csv_rows(self) -> tuple:
        header = ["index", "parameter", "value"] + (["error"] if self.errors is not None else [])
        if self.points is not None:
            header.insert(2, "direction")
        rows = []
        for i, (g, v) in enumerate(zip(self.grid, self.values)):
            row = [i, f"{g:.17g}", f"{v:.17g}"]
            if self.points is not None:
                row.insert(2, " ".join(f"{x:.17g}" for x in self.points[i]))
            if self.errors is not None:
                row.append(f"{self.errors[i]:.3g}")
            rows.append(row)
        return header, rows


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return x


def golden_max(f: Callable[[float], float], a: float, b: float, tol: float) -> tuple:
    """Golden-section search for a maximum of ``f`` on [a, b].

    Returns ``(x, f(x), bracket_lo, bracket_hi)``; endpoints are compared too,
    so a boundary maximum is returned exactly.
    """
    fa, fb = f(a), f(b)
    lo, hi = a, b
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = f(x2)
    cands = [(fa, a), (f1, x1), (f2, x2), (fb, b)]
    best_f, best_x = max(cands, key=lambda c: (c[0], -c[1]))
    return best_x, best_f, lo, hi


def _check_pq(p: float, q: float) -> None:
    if not 1.0 < p < q:
        raise ValueError(f"need 1 < p < q, got p={p}, q={q}")


def _s_grid(grid_size: int) -> np.ndarray:
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    return np.linspace(0.0, 1.0, grid_size)


def _map(fn, items, jobs: int):
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))
    return [fn(x) for x in items]


# ---------------------------------------------------------------------------
# Gamma^s scans


def _norm_ratio_point(args):
    s, p, q = args
    mq, eq = dens.gamma_s_moment(s, q, with_error=True)
    mp, ep = dens.gamma_s_moment(s, p, with_error=True)
    r = mq ** (1.0 / q) / mp ** (1.0 / p)
    return r, r * (eq / (q * mq) + ep / (p * mp))


def norm_ratio(s: float, p: float, q: float) -> float:
    return _norm_ratio_point((s, p, q))[0]


def _refine_s(f, grid, values, errors, tol):
    k = int(np.argmax(values))
    a = grid[max(k - 1, 0)]
    b = grid[min(k + 1, len(grid) - 1)]
    x, fx, lo, hi = golden_max(f, float(a), float(b), tol)
    # an interior point must beat the grid value by more than its noise
    noise = max(errors[k], 16 * np.finfo(float).eps * abs(values[k]))
    if fx > values[k] + noise:
        return x, fx, (lo, hi)
    return float(grid[k]), float(values[k]), (float(a), float(b))


def norm_ratio_scan(p: float, q: float, grid_size: int = DEFAULT_GRID,
                    refine: bool = True, tol: float = S_TOL, jobs: int = 1) -> ScanReport:
    """``||Gamma^s||_q / ||Gamma^s||_p`` over an s-grid in [0, 1]."""
    _check_pq(p, q)
    grid = _s_grid(grid_size)
    res = _map(_norm_ratio_point, [(float(s), p, q) for s in grid], jobs)
    values = np.array([r[0] for r in res])
    errors = [r[1] for r in res]
    k = int(np.argmax(values))
    argmax, best = float(grid[k]), float(values[k])
    bracket = None
    if refine:
        argmax, best, bracket = _refine_s(lambda s: norm_ratio(s, p, q), grid, values, errors, tol)
    return ScanReport(
        grid=grid.tolist(), values=values.tolist(), argmax=argmax, max_value=best,
        claim="norm ratio over the Gamma^s family is maximal on the family",
        metadata={"p": p, "q": q, "grid_size": grid_size, "refine": refine,
                  "tol": tol, "quad_epsrel": dens.QUAD_EPSREL},
        errors=errors,
        extra={"endpoint_values": {"0": float(values[0]), "1": float(values[-1])},
               "argmax_at_endpoint": argmax in (0.0, 1.0),
               "refine_bracket": bracket})


def _signed_ratio_point(args):
    s, p, q = args
    mq, eq = dens.gamma_s_signed_moment(s, q, with_error=True)
    mp, ep = dens.gamma_s_moment(s, p, with_error=True)
    den = mp ** (q / p)
    v = mq / den
    return v, (eq + abs(v) * (q / p) * ep / mp * den) / den


def signed_ratio(s: float, p: float, q: float) -> float:
    """``E[|X|^q sgn X] / ||X||_p^q`` for X = Gamma^s (scale invariant)."""
    return _signed_ratio_point((s, p, q))[0]


def signed_ratio_scan(p: float, q: float, grid_size: int = DEFAULT_GRID,
                      jobs: int = 1) -> ScanReport:
    _check_pq(p, q)
    grid = _s_grid(grid_size)
    res = _map(_signed_ratio_point, [(float(s), p, q) for s in grid], jobs)
    values = np.array([r[0] for r in res])
    k = int(np.argmax(values))
    return ScanReport(
        grid=grid.tolist(), values=values.tolist(), argmax=float(grid[k]),
        max_value=float(values[k]),
        claim="signed q-moment over p-norm is maximised by Gamma (s = 1)",
        metadata={"p": p, "q": q, "grid_size": grid_size,
                  "objective": "E[|X|^q sgn X] / ||X||_p^q"},
        errors=[r[1] for r in res],
        extra={"endpoint_values": {"0": float(values[0]), "1": float(values[-1])},
               "argmax_is_s1": k == len(grid) - 1})


@dataclass(frozen=True)
class PhiFunction:
    """A test function with ``phi^(k) > 0`` and exponential growth at most ``growth``."""

    name: str
    func: Callable[[float], float]
    k: int
    growth: float = 0.0


PHI_CATALOG = {
    "cube": PhiFunction("cube", lambda x: x ** 3, 3),
    "quartic": PhiFunction("quartic", lambda x: x ** 4, 4),
    "exp": PhiFunction("exp", lambda x: math.exp(0.5 * x), 3, 0.5),
    "cube_plus_exp": PhiFunction("cube_plus_exp", lambda x: x ** 3 + math.exp(0.25 * x), 3, 0.25),
    "quartic_plus_cube": PhiFunction("quartic_plus_cube", lambda x: x ** 4 + x ** 3, 4),
    "constant": PhiFunction("constant", lambda x: 1.0, 0),
}


def _phi_point(args):
    s, phi = args
    sigma = math.sqrt(2 * s * s - 2 * s + 1)
    if phi.growth:
        worst = max(s, 1.0 - s) * phi.growth / sigma
        if worst >= 1.0:
            raise ValueError(f"phi {phi.name} is not integrable against Gamma^{s}")
    v, e = dens.gamma_s_density(s).expect(lambda x: phi.func(x / sigma))
    if not math.isfinite(v):
        raise ValueError(f"non-finite expectation for phi {phi.name} at s={s}")
    return v, e


def phi_scan(phi, grid_size: int = DEFAULT_GRID, jobs: int = 1) -> ScanReport:
    """``E[phi(Gamma^s / ||Gamma^s||_2)]`` over the s-grid."""
    if isinstance(phi, str):
        phi = PHI_CATALOG[phi]
    grid = _s_grid(grid_size)
    if jobs and jobs > 1 and phi.name not in PHI_CATALOG:
        jobs = 1  # user callables may not pickle
    res = _map(_phi_point, [(float(s), phi) for s in grid], jobs)
    values = np.array([r[0] for r in res])
    k = int(np.argmax(values))
    argmax = float(grid[k])
    at_end = k in (0, len(grid) - 1)
    return ScanReport(
        grid=grid.tolist(), values=values.tolist(), argmax=argmax,
        max_value=float(values[k]),
        claim=f"E[phi] over unit-variance Gamma^s (phi={phi.name}, k={phi.k})",
        metadata={"phi": phi.name, "k": phi.k, "grid_size": grid_size,
                  "normalisation": "unit variance"},
        errors=[r[1] for r in res],
        extra={"endpoint_values": {"0": float(values[0]), "1": float(values[-1])},
               "argmax_at_endpoint": at_end,
               # With Gamma^s = s*Gamma - (1-s)*Gamma' the k = 3 maximiser is s = 1;
               # reflecting s -> 1-s gives the opposite orientation.
               "argmax_reflected": 1.0 - argmax,
               "k3_endpoint_claim": (phi.k == 3 and at_end) if phi.k == 3 else None})


# ---------------------------------------------------------------------------
# direction scans over bodies


def fibonacci_sphere(count: int) -> np.ndarray:
    i = np.arange(count) + 0.5
    polar = np.arccos(1.0 - 2.0 * i / count)
    azim = math.pi * (1.0 + math.sqrt(5.0)) * i
    return np.column_stack([np.cos(azim) * np.sin(polar),
                            np.sin(azim) * np.sin(polar),
                            np.cos(polar)])


def canonical_direction(theta) -> np.ndarray:
    """Representative of {theta, -theta}: first clearly nonzero coordinate positive."""
    theta = np.asarray(theta, dtype=float)
    theta = theta / np.linalg.norm(theta)
    for c in theta:
        if abs(c) > 1e-12:
            return theta if c > 0 else -theta
    return theta


def family_distance(n: int, theta) -> float:
    """Angular distance from +-theta to the arcs ``s*theta_i - (1-s)*theta_j``."""
    normals = dens.facet_normals(n)
    theta = np.asarray(theta, dtype=float)
    theta = theta / np.linalg.norm(theta)
    best = math.pi
    for sign in (1.0, -1.0):
        x = sign * theta
        for i in range(n + 1):
            for j in range(n + 1):
                if i != j:
                    best = min(best, _arc_distance(x, -normals[j], normals[i]))
    return best


def _arc_distance(x, a, b) -> float:
    # great-circle arc from a to b (angle < pi)
    def ang(u, v):
        return math.acos(max(-1.0, min(1.0, float(np.dot(u, v)))))

    end = min(ang(x, a), ang(x, b))
    normal = np.cross(a, b) if len(a) == 3 else None
    if len(a) == 2:
        # planar: the arc covers the angular sector between a and b
        total = ang(a, b)
        return 0.0 if abs(ang(x, a) + ang(x, b) - total) < 1e-12 else end
    if normal is None:
        # general dimension: project onto span(a, b)
        basis, _ = np.linalg.qr(np.column_stack([a, b]))
        proj = basis @ (basis.T @ x)
    else:
        normal = normal / np.linalg.norm(normal)
        proj = x - np.dot(x, normal) * normal
    norm = np.linalg.norm(proj)
    if norm < 1e-15:
        return end
    proj = proj / norm
    total = ang(a, b)
    if abs(ang(proj, a) + ang(proj, b) - total) < 1e-12:
        return ang(x, proj)
    return end


class _ExactObjective:
    def __init__(self, body: dens.ConvexBody, p: float, q: float, signed: bool):
        self.body, self.p, self.q, self.signed = body, p, q, signed

    def __call__(self, thetas) -> tuple:
        thetas = np.atleast_2d(thetas)
        mp = self.body.marginal_moments(thetas, self.p)
        mq = self.body.marginal_moments(thetas, self.q, signed=self.signed)
        den = mp ** (1.0 / self.p)
        if not self.signed:
            return mq ** (1.0 / self.q) / den, 64 * np.finfo(float).eps * mq ** (1.0 / self.q) / den
        scale_q = self.body.marginal_moments(thetas, self.q)
        noise = 64 * np.finfo(float).eps * scale_q
        val = np.abs(mq) ** (1.0 / self.q) / den
        err = ((np.abs(mq) + noise) ** (1.0 / self.q) - np.abs(mq) ** (1.0 / self.q)) / den
        return val, err


class _MonteCarloObjective:
    def __init__(self, sampler: dens.BodySampler, p: float, q: float, signed: bool,
                 N: int, chunk: int = 1 << 16):
        self.p, self.q, self.signed = p, q, signed
        self.points = np.concatenate([sampler.sample(size, rng)
                                      for size, rng in sampler.chunks(N, chunk)])

    def __call__(self, thetas, batch: int = 64) -> tuple:
        thetas = np.atleast_2d(thetas)
        vals, errs = [], []
        for start in range(0, len(thetas), batch):
            y = self.points @ thetas[start:start + batch].T
            a = np.abs(y)
            xp = a ** self.p
            xq = np.sign(y) * a ** self.q if self.signed else a ** self.q
            n = len(y)
            mp, mq = xp.mean(axis=0), xq.mean(axis=0)
            cov_pp = xp.var(axis=0, ddof=1) / n
            cov_qq = xq.var(axis=0, ddof=1) / n
            cov_pq = ((xp - mp) * (xq - mq)).sum(axis=0) / (n - 1) / n
            amq = np.abs(mq)
            r = amq ** (1.0 / self.q) / mp ** (1.0 / self.p)
            # delta method on log r
            gq = np.sign(mq) / (self.q * np.where(amq > 0, mq, np.inf))
            gp = -1.0 / (self.p * mp)
            var = gq * gq * cov_qq + gp * gp * cov_pp + 2 * gq * gp * cov_pq
            vals.append(r)
            errs.append(r * np.sqrt(np.maximum(var, 0.0)))
        return np.concatenate(vals), np.concatenate(errs)


def _pick(thetas, values, rtol=1e-12) -> int:
    """Index of the max, ties toward the lexicographically smallest direction."""
    best = np.max(values)
    tied = np.flatnonzero(values >= best - rtol * abs(best))
    if len(tied) == 1:
        return int(tied[0])
    canon = [tuple(canonical_direction(thetas[i])) for i in tied]
    return int(tied[min(range(len(tied)), key=lambda i: canon[i])])


def _refine_circle(obj, angle, step, tol):
    def f(a):
        return float(obj(np.array([[math.cos(a), math.sin(a)]]))[0][0])

    x, fx, lo, hi = golden_max(f, angle - step, angle + step, tol)
    err = max(fx - f(lo), fx - f(hi), 0.0)
    return np.array([math.cos(x), math.sin(x)]), fx, err


def _tangent_basis(x):
    n = len(x)
    m = np.eye(n) - np.outer(x, x)
    u, _, _ = np.linalg.svd(m)
    return u[:, : n - 1].T


def _refine_sphere(obj, theta, step, tol, max_iter=10_000):
    """Coordinate pattern search on the sphere, halving the step to ``tol``."""
    x = theta / np.linalg.norm(theta)
    fx = float(obj(x[None])[0][0])
    h = step
    last_gap = 0.0
    it = 0
    while h >= tol and it < max_iter:
        it += 1
        basis = _tangent_basis(x)
        trial = np.concatenate([x + h * basis, x - h * basis])
        trial /= np.linalg.norm(trial, axis=1, keepdims=True)
        vals = obj(trial)[0]
        k = int(np.argmax(vals))
        if vals[k] > fx:
            x, fx = trial[k], float(vals[k])
        else:
            last_gap = float(fx - np.min(vals))
            h *= 0.5
    return x, fx, last_gap


def _local_maxima_1d(values, count):
    v = np.asarray(values)
    left, right = np.roll(v, 1), np.roll(v, -1)
    idx = np.flatnonzero((v >= left) & (v >= right))
    return idx[np.argsort(-v[idx])][:count]


def _direction_scan(body, p, q, signed, direction_budget, mode, tol, N, seed,
                    candidates, claim):
    _check_pq(p, q)
    if isinstance(body, dens.BodySampler):
        sampler, geom = body, body.body
    else:
        geom = body
        sampler = dens.BodySampler(body.kind, body.n, seed, body.scale)
    n = geom.n
    if mode == "auto":
        mode = "exact" if n <= 3 else "mc"
    if mode == "exact":
        if n not in (2, 3):
            raise ValueError("exact mode supports n in {2, 3}")
        obj = _ExactObjective(geom, p, q, signed)
    elif mode == "mc":
        if n > 6:
            raise ValueError("Monte Carlo mode supports n <= 6")
        obj = _MonteCarloObjective(sampler, p, q, signed, N)
    else:
        raise ValueError(f"unknown mode {mode!r}")

    if n == 2:
        budget = direction_budget or 2048
        angles = np.arange(budget) * (math.pi / budget)
        thetas = np.column_stack([np.cos(angles), np.sin(angles)])
        step = math.pi / budget
    elif n == 3:
        budget = direction_budget or 4096
        thetas = fibonacci_sphere(budget)
        step = math.sqrt(4.0 * math.pi / budget)
    else:
        budget = direction_budget or 2048
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed).spawn(2)[1]))
        g = rng.standard_normal((budget, n))
        thetas = g / np.linalg.norm(g, axis=1, keepdims=True)
        step = 2.0 * budget ** (-1.0 / (n - 1))
    values, errs = obj(thetas)

    best_theta = thetas[_pick(thetas, values)]
    best_val = float(np.max(values))
    best_err = float(errs[_pick(thetas, values)])
    converged = True
    if tol is not None and tol > 0:
        if n == 2:
            order = _local_maxima_1d(values, candidates)
        else:
            order = np.argsort(-values)[:candidates]
        refined = []
        for i in order:
            if n == 2:
                th, fv, gap = _refine_circle(obj, float(angles[i]), step, tol)
            else:
                th, fv, gap = _refine_sphere(obj, thetas[i], step, tol)
            th_err = float(obj(th[None])[1][0])
            refined.append((fv, canonical_direction(th), gap + th_err))
        refined.append((best_val, canonical_direction(best_theta), best_err))
        top = max(r[0] for r in refined)
        tied = [r for r in refined if r[0] >= top - 1e-12 * abs(top)]
        best_val, best_theta, best_err = min(tied, key=lambda r: tuple(r[1]))
        best_val = top
    report = ScanReport(
        grid=list(range(len(thetas))),
        points=[canonical_direction(t).tolist() for t in thetas],
        values=np.asarray(values).tolist(),
        argmax=canonical_direction(best_theta).tolist(),
        max_value=best_val,
        claim=claim,
        metadata={"body": geom.kind, "n": n, "p": p, "q": q, "mode": mode,
                  "direction_budget": budget, "tol": tol,
                  "N": N if mode == "mc" else None,
                  "seed": sampler.seed if mode == "mc" else None},
        errors=np.asarray(errs).tolist(),
        extra={"error_estimate": best_err, "converged": converged},
    )
    if geom.kind == "simplex" and n >= 2:
        report.extra["family_distance"] = family_distance(n, report.argmax) if n <= 3 else None
    return report


def alpha_body(body, p: float, q: float, direction_budget: Optional[int] = None,
               mode: str = "auto", tol: Optional[float] = DIRECTION_TOL,
               N: int = 200_000, seed: int = 0, candidates: int = 4) -> ScanReport:
    """``max_theta ||X.theta||_q / ||X.theta||_p`` for X uniform on the body."""
    return _direction_scan(body, p, q, False, direction_budget, mode, tol, N, seed,
                           candidates, "heaviest-tail functional of the body")


def alpha_star_body(body, p: float, q: float, direction_budget: Optional[int] = None,
                    mode: str = "auto", tol: Optional[float] = DIRECTION_TOL,
                    N: int = 200_000, seed: int = 0, candidates: int = 4) -> ScanReport:
    """Same scan with numerator ``|E[|X.theta|^q sgn(X.theta)]|^(1/q)``."""
    return _direction_scan(body, p, q, True, direction_budget, mode, tol, N, seed,
                           candidates, "tail-asymmetry functional of the body")


# ---------------------------------------------------------------------------
# strictness sweep for mu_n(cos t Gamma - sin t Gamma')


@dataclass
class Thm4Report:
    n_values: list
    t_grid: list
    margins: dict  # n -> list of (!n - mu_n(t))
    min_margin: dict
    violations: list
    cumulant_violations: list
    boundary_values: dict

    @property
    def ok(self) -> bool:
        return not self.violations and not self.cumulant_violations

    def to_dict(self) -> dict:
        return _jsonable({
            "ok": self.ok,
            "n_values": self.n_values,
            "t_grid": self.t_grid,
            "min_margin": self.min_margin,
            "violations": self.violations,
            "cumulant_violations": self.cumulant_violations,
            "boundary_values": self.boundary_values,
            "margins": self.margins,
        })

    def csv_rows(self) -> tuple:
        header = ["n", "t", "moment", "subfactorial", "margin"]
        rows = []
        for n in self.n_values:
            sf = subfactorial(n)
            for t, m in zip(self.t_grid, self.margins[n]):
                rows.append([n, f"{t:.17g}", f"{sf - m:.17g}", sf, f"{m:.17g}"])
        return header, rows


def verify_thm4(n_max: int, t_grid: int = 97) -> Thm4Report:
    """Check ``mu_n(cos t Gamma - sin t Gamma') < !n`` on interior t for even n."""
    if n_max < 4 or n_max % 2:
        raise ValueError("n_max must be an even integer >= 4")
    if t_grid < 1:
        raise ValueError("t_grid must be >= 1")
    ts = [(j + 1) * (math.pi / 2) / (t_grid + 1) for j in range(t_grid)]
    ns = list(range(4, n_max + 1, 2))
    margins, min_margin, violations, kviol, boundary = {}, {}, [], [], {}
    for n in ns:
        sf = subfactorial(n)
        row = []
        for t in ts:
            mu = moment_cos_sin(n, t)
            row.append(sf - mu)
            if not mu < sf:
                violations.append({"n": n, "t": t, "moment": mu, "subfactorial": sf})
        margins[n] = row
        min_margin[n] = min(row)
        boundary[n] = {"t=0": moment_cos_sin(n, 0.0), "t=pi/2": moment_cos_sin(n, math.pi / 2)}
        # k_2 = 1 for every t; strictness starts at order 3
        for i in range(3, n + 1):
            bound = math.factorial(i - 1)
            for t in ts:
                if not abs(cumulant_cos_sin(i, t)) < bound:
                    kviol.append({"i": i, "t": t})
    return Thm4Report(ns, ts, margins, min_margin, violations, kviol, boundary)
