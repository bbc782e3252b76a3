"""Randomised root-count checks for Chebyshev systems.

Roots are counted as sign changes, so even-multiplicity tangencies are not
counted; for an upper-bound check this errs on the safe side.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

TRUNCATION = 50.0
BISECT_WIDTH = 1e-12


@dataclass(frozen=True)
class FuncSystem:
    """Power system or smooth system.

    The power kind has ``u_i = |t|^p_i`` for even i and ``|t|^p_i sgn(t)`` for
    odd i, with p = (0, 1, p2, ...).  The smooth kind is ``{1, x, .., x^(k-1), phi}``.
    """

    kind: str
    exponents: tuple = ()
    phi: Optional[Callable] = None
    phi_name: str = ""
    phi_growth: float = 0.0  # phi(x) = O(exp(phi_growth * |x|))

    def __post_init__(self):
        if self.kind == "power-sgn":
            p = tuple(float(x) for x in self.exponents)
            if len(p) < 2 or p[0] != 0.0 or p[1] != 1.0:
                raise ValueError("power-sgn exponents must start with 0, 1")
            if any(b <= a for a, b in zip(p, p[1:])):
                raise ValueError("exponents must be strictly increasing")
            object.__setattr__(self, "exponents", p)
        elif self.kind == "smooth":
            if self.phi is None or len(self.exponents) < 1:
                raise ValueError("smooth systems need monomial degrees and phi")
            if tuple(self.exponents) != tuple(range(len(self.exponents))):
                raise ValueError("smooth systems use monomials 1, x, ..., x^(k-1)")
            object.__setattr__(self, "exponents", tuple(int(x) for x in self.exponents))
        else:
            raise ValueError(f"unknown system kind {self.kind!r}")

    @classmethod
    def power_sgn(cls, exponents: Sequence[float]) -> "FuncSystem":
        return cls("power-sgn", tuple(exponents))

    @classmethod
    def smooth(cls, k: int, phi: Callable = np.exp, name: str = "exp",
               growth: float = 1.0) -> "FuncSystem":
        return cls("smooth", tuple(range(k)), phi, name, growth)

    @property
    def order(self) -> int:
        return len(self.exponents) if self.kind == "smooth" else len(self.exponents) - 1

    def basis(self, x) -> np.ndarray:
        """Matrix of basis values, shape (len(x), order + 1)."""
        x = np.asarray(x, dtype=float)
        if self.kind == "power-sgn":
            a, sg = np.abs(x), np.sign(x)
            cols = [np.ones_like(x)] + [(sg if i % 2 else 1.0) * a ** p
                                        for i, p in enumerate(self.exponents) if i]
        else:
            cols = [x ** d for d in self.exponents] + [np.asarray(self.phi(x), dtype=float)]
        return np.stack(cols, axis=-1)


def _check_coeffs(sys: FuncSystem, coeffs) -> np.ndarray:
    c = np.asarray(coeffs, dtype=float)
    if c.shape != (sys.order + 1,):
        raise ValueError(f"need {sys.order + 1} coefficients, got {c.shape}")
    if not np.any(c):
        raise ValueError("coefficient vector must not be identically zero")
    return c


def combo_eval(sys: FuncSystem, coeffs, x):
    c = _check_coeffs(sys, coeffs)
    out = sys.basis(x) @ c
    return float(out) if np.ndim(out) == 0 else out


def _grid(lo: float, hi: float, count: int) -> np.ndarray:
    pts = [np.linspace(lo, hi, count)]
    # power terms change character near 0; add geometric points around it
    if lo < 0 < hi:
        g = np.geomspace(1e-9, min(-lo, hi), count // 2)
        pts += [g[g < hi], -g[-g > lo], [0.0]]
    return np.unique(np.concatenate(pts))


def _bisect(f, a, b, fa):
    # width 1e-12, relative once |x| > 1 where absolute spacing is too coarse
    while b - a > BISECT_WIDTH * max(1.0, abs(a), abs(b)):
        m = 0.5 * (a + b)
        if not a < m < b:
            break
        fm = f(m)
        if fm == 0.0:
            return m
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def _scalar(sys: FuncSystem, c: np.ndarray) -> Callable[[float], float]:
    """Plain-float evaluator; much cheaper than the array path for single points."""
    coeffs = [float(v) for v in c]
    if sys.kind == "power-sgn":
        terms = [(coeffs[i], p, i % 2 == 1) for i, p in enumerate(sys.exponents) if i and coeffs[i]]
        c0 = coeffs[0]

        def f(x):
            a = abs(x)
            acc = c0
            for ci, p, odd in terms:
                v = ci * a ** p
                acc += (v if x > 0 else -v if x < 0 else 0.0) if odd else v
            return acc
        return f
    k = len(sys.exponents)
    phi, cp = sys.phi, coeffs[k]

    def g(x):
        acc = 0.0
        for ci in reversed(coeffs[:k]):
            acc = acc * x + ci
        return acc + cp * float(phi(x))
    return g


def _hidden_pairs(f, xs, ys):
    """Extra grid points where |f| dips between samples of one sign."""
    extra = []
    a = np.abs(ys)
    sg = np.sign(ys)
    dip = np.flatnonzero((a[1:-1] < a[:-2]) & (a[1:-1] <= a[2:])
                         & (sg[:-2] == sg[1:-1]) & (sg[2:] == sg[1:-1])) + 1
    for i in dip:
        lo, hi = xs[i - 1], xs[i + 1]
        sign = np.sign(ys[i])
        # golden search for the minimum of sign*f
        g = (math.sqrt(5) - 1) / 2
        x1, x2 = hi - g * (hi - lo), lo + g * (hi - lo)
        f1, f2 = sign * f(x1), sign * f(x2)
        for _ in range(80):
            if f1 < 0 or f2 < 0 or hi - lo < BISECT_WIDTH * max(1.0, abs(lo)):
                break
            if f1 < f2:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - g * (hi - lo)
                f1 = sign * f(x1)
            else:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + g * (hi - lo)
                f2 = sign * f(x2)
        if min(f1, f2) < 0:
            extra.append(x1 if f1 < f2 else x2)
    return extra


def _roots_on(f, fs, lo, hi, initial_grid):
    xs = _grid(lo, hi, initial_grid)
    ys = f(xs)
    extra = _hidden_pairs(fs, xs, ys)
    if extra:
        xs = np.unique(np.concatenate([xs, extra]))
        ys = f(xs)
    roots = []
    # drop exact zeros (a root sitting on a grid point counts once)
    nz = ys != 0.0
    zeros = xs[~nz]
    xs, ys = xs[nz], ys[nz]
    for i in range(len(xs) - 1):
        if (ys[i] > 0) != (ys[i + 1] > 0):
            inside = zeros[(zeros > xs[i]) & (zeros < xs[i + 1])]
            if len(inside):
                roots.append(float(inside[0]))
            else:
                roots.append(_bisect(fs, xs[i], xs[i + 1], ys[i]))
    return roots


def dominance_radius(sys: FuncSystem, coeffs) -> float:
    """Radius beyond which the leading term fixes the sign of the combination."""
    c = _check_coeffs(sys, coeffs)
    nz = np.flatnonzero(c)
    top = int(nz[-1])
    if top == 0:
        return 0.0
    lead = abs(c[top])
    rest = np.abs(c[:top]).sum()
    if sys.kind == "power-sgn":
        p = sys.exponents
        # |c_top| x^p_top > sum |c_i| x^p_i for x >= 1 once x^(p_top - p_{top-1}) > rest/lead
        gap = p[top] - p[top - 1]
        return max(1.0, (rest / lead) ** (1.0 / gap)) * (1 + 1e-9)
    # smooth: beyond R, exp dominates polynomials on the right; left tail is polynomial
    k = len(sys.exponents)
    if top < k:
        return max(1.0, rest / lead) * (1 + 1e-9)
    r = 1.0
    while lead * math.exp(sys.phi_growth * r) <= rest * r ** (k - 1) * 2:
        r *= 2.0
    return r


def _tail_roots_possible(sys, c, R, bound):
    """True if a crossing outside [-bound, bound] cannot be ruled out."""
    if sys.kind == "power-sgn":
        return R > bound
    k = len(sys.exponents)
    if c[k] == 0:
        return dominance_radius(sys, c) > bound
    # right tail: phi dominates beyond R; left tail: phi -> 0, polynomial dominates
    poly = c[:k]
    nz = np.flatnonzero(poly)
    if len(nz) == 0:
        return False
    top = int(nz[-1])
    lead, rest = abs(poly[top]), np.abs(poly[:top]).sum() + abs(c[k])
    left_R = max(1.0, rest / lead) if top > 0 else (abs(c[k]) / lead if lead else math.inf)
    return R > bound or left_R > bound


def count_sign_changes(sys: FuncSystem, coeffs, interval=(-TRUNCATION, TRUNCATION),
                       initial_grid: int = 512, extend: bool = True) -> int:
    """Number of sign alternations of the combination on ``interval``.

    With ``extend`` the interval grows until the leading term provably fixes
    the sign outside it, so no crossing is lost to truncation.
    """
    if initial_grid < 64:
        raise ValueError("initial_grid must be >= 64")
    lo, hi = map(float, interval)
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValueError("interval must be finite with lo < hi")
    c = _check_coeffs(sys, coeffs)

    def f(x):
        return sys.basis(x) @ c

    if extend:
        R = dominance_radius(sys, c)
        bound = min(-lo, hi)
        while _tail_roots_possible(sys, c, R, bound) and bound < 1e12:
            bound *= 4.0
        lo, hi = min(lo, -bound), max(hi, bound)
    return len(_roots_on(f, _scalar(sys, c), lo, hi, initial_grid))


def find_roots(sys: FuncSystem, coeffs, interval=(-TRUNCATION, TRUNCATION),
               initial_grid: int = 512) -> list:
    c = _check_coeffs(sys, coeffs)
    return _roots_on(lambda x: sys.basis(x) @ c, _scalar(sys, c), float(interval[0]),
                     float(interval[1]), initial_grid)


def random_power_exponents(order: int, rng: np.random.Generator) -> tuple:
    """p2 ~ U(1.1, 4), p3 ~ U(p2 + .1, 6), p4 ~ U(p3 + .1, 9), truncated to ``order``."""
    if not 1 <= order <= 4:
        raise ValueError("power-sgn order must be in 1..4")
    p = [0.0, 1.0]
    caps = [4.0, 6.0, 9.0]
    prev = 1.0
    for j in range(order - 1):
        low = 1.1 if j == 0 else prev + 0.1
        prev = float(rng.uniform(low, caps[j]))
        p.append(prev)
    return tuple(p)


@dataclass
class TrialSummary:
    system: str
    order: int
    trials: int
    seed: int
    max_roots: int
    violations: int
    worst: Optional[dict] = None

    def to_dict(self) -> dict:
        return {"system": self.system, "order": self.order, "trials": self.trials,
                "seed": self.seed, "max_roots": self.max_roots,
                "violations": self.violations, "worst": self.worst}


def _run_trials(args):
    sys, order, random_exponents, children, initial_grid = args
    max_roots, violations, worst = 0, 0, None
    with np.errstate(over="ignore", invalid="ignore"):
        for child in children:
            rng = np.random.Generator(np.random.Philox(child))
            system = (FuncSystem.power_sgn(random_power_exponents(order, rng))
                      if random_exponents else sys)
            c = rng.standard_normal(order + 1)
            n = count_sign_changes(system, c, initial_grid=initial_grid)
            if n > max_roots:
                max_roots = n
                worst = {"exponents": list(system.exponents), "coeffs": c.tolist(), "roots": n}
            violations += n > order
    return max_roots, violations, worst


def cheb_trial(sys, trials: int, seed: int = 0, initial_grid: int = 256,
               jobs: int = 1) -> TrialSummary:
    """Random coefficient (and exponent) draws, counting sign changes against the order.

    ``sys`` is a :class:`FuncSystem` (fixed basis) or ``("power-sgn", order)``
    to redraw admissible exponents every trial.  Each trial has its own child
    seed, so the summary does not depend on ``jobs``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    children = np.random.SeedSequence(seed).spawn(trials)
    if isinstance(sys, FuncSystem):
        order = sys.order
        label = sys.kind if sys.kind != "smooth" else f"smooth-{sys.phi_name}"
        random_exponents = False
    else:
        label, order = sys
        random_exponents = True
    jobs = max(1, min(jobs or 1, trials))
    chunks = [children[i::jobs] for i in range(jobs)]
    work = [(sys, order, random_exponents, ch, initial_grid) for ch in chunks]
    if jobs == 1:
        parts = [_run_trials(work[0])]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_trials, work))
    max_roots = max(p[0] for p in parts)
    violations = sum(p[1] for p in parts)
    # first chunk reaching the max, so the report is stable for a given jobs value
    worst = next((p[2] for p in parts if p[0] == max_roots), None)
    return TrialSummary(label, order, trials, seed, max_roots, int(violations), worst)


def interpolating_combo(p: float, x1: float, x2: float) -> tuple:
    """Coefficients of ``a0 + a1 x + |x|^p`` vanishing exactly at x1 and x2."""
    if not x1 < x2:
        raise ValueError("need x1 < x2")
    a = np.array([[1.0, x1], [1.0, x2]])
    b = -np.array([abs(x1) ** p, abs(x2) ** p])
    a0, a1 = np.linalg.solve(a, b)
    return FuncSystem.power_sgn((0, 1, p)), np.array([a0, a1, 1.0])
