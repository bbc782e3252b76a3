"""Densities and moments of one-dimensional marginals.

Two families live here:

* ``Gamma^s = s*Gamma - (1-s)*Gamma'``, whose density is a log-affine tent
  ``exp((x+1)/(1-s) - 2)`` left of ``1-2s`` and ``exp((1-x)/s - 2)`` right of
  it.  Moments are computed by adaptive quadrature.
* marginals ``theta . X`` of uniform measures on polytopes.  A polytope is
  triangulated into equal-volume simplices; the marginal of each simplex is
  the normalised B-spline (M-spline) on the projected vertices, built as
  piecewise polynomials with the Cox-de Boor recursion.

Monte Carlo samplers for the reference bodies serve as the oracle.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy import integrate, special

QUAD_EPSREL = 1e-12
QUAD_EPSABS = 0.0
KNOT_MERGE_RTOL = 1e-13
BODY_KINDS = ("simplex", "cube", "ball", "cross")


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach its tolerance."""

    def __init__(self, message: str, error_estimate: float = float("nan")):
        super().__init__(f"{message} (error estimate {error_estimate:.3g})")
        self.error_estimate = error_estimate


# ---------------------------------------------------------------------------
# Gamma^s


@dataclass(frozen=True)
class PiecewiseExpDensity:
    s: float

    def __post_init__(self):
        if not 0.0 <= self.s <= 1.0:
            raise ValueError(f"s must lie in [0, 1], got {self.s}")

    @property
    def breakpoint(self) -> float:
        return 1.0 - 2.0 * self.s

    @property
    def left_scale(self) -> float:
        return 1.0 - self.s

    @property
    def right_scale(self) -> float:
        return self.s

    @property
    def degenerate_left(self) -> bool:
        return self.s == 1.0

    @property
    def degenerate_right(self) -> bool:
        return self.s == 0.0

    @property
    def support(self) -> tuple:
        lo = self.breakpoint if self.degenerate_left else -math.inf
        hi = self.breakpoint if self.degenerate_right else math.inf
        return lo, hi

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        c = self.breakpoint
        out = np.full(x.shape, -np.inf)
        if not self.degenerate_left:
            out = np.where(x <= c, (x - c) / self.left_scale, out)
        if not self.degenerate_right:
            out = np.where(x >= c, (c - x) / self.right_scale, out)
        return out

    def pdf(self, x):
        return np.exp(self.logpdf(x))

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        c, a, b = self.breakpoint, self.left_scale, self.right_scale
        left = a * np.exp(np.minimum(x - c, 0.0) / a) if a > 0 else np.zeros_like(x)
        right = b * -np.expm1(-np.maximum(x - c, 0.0) / b) if b > 0 else np.zeros_like(x)
        return np.where(x < c, left, a + right)

    def pieces(self):
        """(breakpoint, scale, direction) for each non-degenerate exponential ray."""
        out = []
        if not self.degenerate_left:
            out.append((self.breakpoint, self.left_scale, -1))
        if not self.degenerate_right:
            out.append((self.breakpoint, self.right_scale, +1))
        return out

    def expect(self, g: Callable[[float], float], kinks: Sequence[float] = (0.0,),
               epsrel: float = QUAD_EPSREL) -> tuple:
        """``(E[g(X)], abs error estimate)`` by adaptive quadrature per ray."""
        total, err = 0.0, 0.0
        for c, scale, direction in self.pieces():
            v, e = _ray_integral(g, c, scale, direction, kinks, epsrel)
            total += v
            err += e
        return total, err


def _ray_integral(g, c, scale, direction, kinks, epsrel):
    # x = c + direction*scale*y, density factor exp(-y), Jacobian scale
    def f(y):
        w = math.exp(-y)
        # past exp underflow the weight wins for any admissible g
        return g(c + direction * scale * y) * w if w > 0.0 else 0.0

    cuts = sorted({(k - c) * direction / scale for k in kinks
                   if (k - c) * direction / scale > 0})
    edges = [0.0] + cuts
    total, err = 0.0, 0.0
    for lo, hi in zip(edges, edges[1:] + [math.inf]):
        if hi == math.inf:
            # finite stretch around the bulk first, then the tail
            mid = lo + 64.0
            parts = [(lo, mid), (mid, math.inf)]
        else:
            parts = [(lo, hi)]
        for a, b in parts:
            v, e, *info = integrate.quad(f, a, b, epsabs=QUAD_EPSABS,
                                         epsrel=epsrel, limit=400,
                                         full_output=1)
            # a warning message is appended to info on trouble
            if len(info) > 1 and abs(e) > 1e3 * epsrel * max(abs(v), 1e-300):
                raise QuadratureError(f"quadrature did not converge on [{a}, {b}]", e)
            total += v
            err += e
    return total * scale, err * scale


def gamma_s_density(s: float) -> PiecewiseExpDensity:
    return PiecewiseExpDensity(float(s))


def _abs_power(p: float, signed: bool = False):
    def g(x):
        if x == 0.0:
            return 1.0 if p == 0 and not signed else 0.0
        v = abs(x) ** p
        return math.copysign(v, x) if signed else v
    return g


def gamma_s_moment(s: float, p: float, with_error: bool = False):
    """``E|Gamma^s|^p`` by quadrature on the closed-form density."""
    if p < 0:
        raise ValueError("p must be non-negative")
    v, e = gamma_s_density(s).expect(_abs_power(p))
    return (v, e) if with_error else v


def gamma_s_signed_moment(s: float, q: float, with_error: bool = False):
    """``E[|Gamma^s|^q sgn(Gamma^s)]`` by quadrature."""
    if q <= 0:
        raise ValueError("q must be positive")
    v, e = gamma_s_density(s).expect(_abs_power(q, signed=True))
    return (v, e) if with_error else v


def sample_gamma_s(s: float, size: int, rng: np.random.Generator) -> np.ndarray:
    e1 = rng.standard_exponential(size)
    e2 = rng.standard_exponential(size)
    return s * (e1 - 1.0) - (1.0 - s) * (e2 - 1.0)


# ---------------------------------------------------------------------------
# Piecewise polynomial marginals of simplices


def regular_simplex(n: int) -> np.ndarray:
    """Vertices (rows) of the regular n-simplex with centroid 0, circumradius 1."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    # Helmert basis of the hyperplane orthogonal to (1, ..., 1) in R^(n+1)
    h = np.zeros((n, n + 1))
    for k in range(1, n + 1):
        h[k - 1, :k] = 1.0
        h[k - 1, k] = -k
        h[k - 1] /= math.sqrt(k * (k + 1))
    v = h.T.copy()
    return v * math.sqrt((n + 1) / n)


def facet_normals(n: int) -> np.ndarray:
    """Outer unit normals; row i is normal to the facet opposite vertex i."""
    return -regular_simplex(n)


def two_normal_direction(n: int, s: float, i: int = 0, j: int = 1) -> np.ndarray:
    """Normalised ``s*theta_i - (1-s)*theta_j`` for outer facet normals."""
    th = facet_normals(n)
    d = s * th[i] - (1.0 - s) * th[j]
    return d / np.linalg.norm(d)


def _merge_knots(t: np.ndarray) -> np.ndarray:
    t = np.sort(t, axis=-1)
    scale = t[..., -1:] - t[..., :1]
    tol = KNOT_MERGE_RTOL * np.maximum(scale, np.finfo(float).tiny)
    t = t.copy()
    for j in range(1, t.shape[-1]):
        close = (t[..., j] - t[..., j - 1]) <= tol[..., 0]
        t[..., j] = np.where(close, t[..., j - 1], t[..., j])
    return t


def mspline_pieces(t: np.ndarray) -> np.ndarray:
    """Piecewise coefficients of the unit-mass B-spline on knots ``t``.

    ``t`` has shape (B, k+2) and must be sorted along the last axis (merged
    knots allowed, as long as not all are equal).  Returns shape (B, k+1, k+1):
    for interval j = [t_j, t_{j+1}], ascending coefficients in ``x - t_j``.
    """
    t = np.asarray(t, dtype=float)
    nb, nk = t.shape
    deg = nk - 2
    nint = nk - 1
    tj = t[:, :nint]
    h = np.diff(t, axis=1)
    # degree 0: indicator of interval i
    basis = []
    for i in range(nint):
        c = np.zeros((nb, nint, deg + 1))
        c[:, i, 0] = np.where(h[:, i] > 0, 1.0, 0.0)
        basis.append(c)

    def affine_times(c, alpha, beta):
        # (alpha*u + beta) * sum c_k u^k, coefficients along last axis
        out = c * beta[..., None]
        out[..., 1:] += c[..., :-1] * alpha[..., None]
        return out

    with np.errstate(divide="ignore", invalid="ignore"):
        for d in range(1, deg + 1):
            nxt = []
            for i in range(nint - d):
                den1 = t[:, i + d] - t[:, i]
                den2 = t[:, i + d + 1] - t[:, i + 1]
                inv1 = np.where(den1 > 0, 1.0 / den1, 0.0)
                inv2 = np.where(den2 > 0, 1.0 / den2, 0.0)
                a1 = np.broadcast_to(inv1[:, None], (nb, nint))
                b1 = (tj - t[:, i:i + 1]) * inv1[:, None]
                a2 = np.broadcast_to(-inv2[:, None], (nb, nint))
                b2 = (t[:, i + d + 1:i + d + 2] - tj) * inv2[:, None]
                nxt.append(affine_times(basis[i], a1, b1)
                           + affine_times(basis[i + 1], a2, b2))
            basis = nxt
    width = t[:, -1] - t[:, 0]
    return basis[0] * ((deg + 1) / width)[:, None, None]


def _horner(c: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Evaluate polynomials ``c[..., k]`` (ascending) at ``u`` broadcasting over leading axes."""
    out = np.zeros(np.broadcast_shapes(c.shape[:-1] + (1,), u.shape))
    for k in range(c.shape[-1] - 1, -1, -1):
        out = out * u + c[..., k:k + 1]
    return out


@lru_cache(maxsize=None)
def _legendre(m: int):
    return np.polynomial.legendre.leggauss(m)


@lru_cache(maxsize=64)
def _jacobi(m: int, beta: float):
    return special.roots_jacobi(m, 0.0, beta)


GL_NODES = 24
GJ_NODES = 8


def _half_line_integral(c, a, lo, hi, p, sigma):
    """``int_lo^hi y^p P(sigma*y) dy`` with P local at ``a``; lo, hi >= 0.

    Uses Gauss-Jacobi (weight y^p, exact for P) when the interval reaches
    near 0, Gauss-Legendre otherwise (then y^p is analytic well beyond it).
    """
    xg, wg = _legendre(GL_NODES)
    xj, wj = _jacobi(GJ_NODES, float(p))
    width = hi - lo
    # Gauss-Legendre branch
    y = lo[..., None] + 0.5 * width[..., None] * (1.0 + xg)
    vals = y ** p * _horner(c, sigma * y - a[..., None])
    gl = 0.5 * width * (vals @ wg)

    def jac(z):
        y = 0.5 * z[..., None] * (1.0 + xj)
        return (0.5 * z) ** (p + 1) * (_horner(c, sigma * y - a[..., None]) @ wj)

    gj = jac(hi) - jac(lo)
    out = np.where(lo < width, gj, gl)
    return np.where(width > 0, out, 0.0)


def piece_power_integrals(left, right, coeffs, p: float, signed: bool = False):
    """Sum over pieces of ``int |x|^p [sgn x] P_j(x) dx``; returns shape (B,)."""
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    zero = np.zeros_like(left)
    pos = _half_line_integral(coeffs, left, np.maximum(left, zero),
                              np.maximum(right, zero), p, 1.0)
    neg = _half_line_integral(coeffs, left, np.maximum(-right, zero),
                              np.maximum(-left, zero), p, -1.0)
    total = pos - neg if signed else pos + neg
    return total.sum(axis=-1)


@dataclass(frozen=True)
class BSplineDensity:
    """Unit-mass piecewise polynomial density on sorted (possibly merged) knots."""

    knots: np.ndarray
    coeffs: np.ndarray  # (intervals, degree+1), local at each left knot

    @classmethod
    def from_projections(cls, proj) -> "BSplineDensity":
        t = _merge_knots(np.asarray(proj, dtype=float)[None, :])
        if t[0, -1] <= t[0, 0]:
            raise ValueError("all projected vertices coincide")
        return cls(t[0], mspline_pieces(t)[0])

    @property
    def degree(self) -> int:
        return self.coeffs.shape[-1] - 1

    @property
    def support(self) -> tuple:
        return float(self.knots[0]), float(self.knots[-1])

    @property
    def breakpoints(self) -> np.ndarray:
        return np.unique(self.knots)

    def _locate(self, x):
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.knots, x, side="right") - 1
        # Move onto the last non-empty interval containing x.
        h = np.diff(self.knots)
        nonempty = np.flatnonzero(h > 0)
        pos = np.searchsorted(nonempty, idx, side="right") - 1
        pos = np.clip(pos, 0, len(nonempty) - 1)
        return x, nonempty[pos]

    def pdf(self, x):
        x, j = self._locate(x)
        u = x - self.knots[j]
        c = self.coeffs[j]
        val = np.zeros_like(x)
        for k in range(c.shape[-1] - 1, -1, -1):
            val = val * u + c[..., k]
        inside = (x >= self.knots[0]) & (x <= self.knots[-1])
        return np.where(inside, val, 0.0)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        h = np.diff(self.knots)
        k = np.arange(1, self.coeffs.shape[-1] + 1)
        anti = self.coeffs / k  # coefficients of u^(k) after integration
        masses = np.array([np.sum(anti[j] * h[j] ** k) for j in range(len(h))])
        cum = np.concatenate([[0.0], np.cumsum(masses)])
        xs, j = self._locate(x)
        u = np.clip(xs - self.knots[j], 0.0, None)
        u = np.minimum(u, h[j])
        part = np.zeros_like(xs)
        for kk in range(anti.shape[-1] - 1, -1, -1):
            part = (part + anti[j, kk]) * u
        out = cum[j] + part
        out = np.where(xs < self.knots[0], 0.0, out)
        return np.where(xs >= self.knots[-1], 1.0, out)

    def moment(self, p: float, signed: bool = False) -> float:
        return float(piece_power_integrals(self.knots[None, :-1], self.knots[None, 1:],
                                           self.coeffs[None], p, signed)[0])

    def root_affinity_deviation(self, root: int, points: int = 4097) -> float:
        """Max deviation of ``f**(1/root)`` from the chord across the whole support.

        Zero exactly for cone marginals, where the root is a single affine function.
        """
        lo, hi = self.support
        x = np.linspace(lo, hi, points)
        g = np.maximum(self.pdf(x), 0.0) ** (1.0 / root)
        chord = g[0] + (g[-1] - g[0]) * (x - lo) / (hi - lo)
        return float(np.max(np.abs(g - chord)))


def simplex_marginal_density(n: int, theta, vertices: Optional[np.ndarray] = None) -> BSplineDensity:
    """Density of ``theta . X`` for X uniform on the centred regular n-simplex."""
    if n < 2:
        raise ValueError("n must be >= 2")
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (n,):
        raise ValueError(f"theta must have shape ({n},)")
    if abs(np.linalg.norm(theta) - 1.0) > 1e-9:
        raise ValueError("theta must be a unit vector")
    v = regular_simplex(n) if vertices is None else vertices
    return BSplineDensity.from_projections(v @ theta)


# ---------------------------------------------------------------------------
# Reference bodies


@lru_cache(maxsize=None)
def _triangulation(kind: str, n: int) -> np.ndarray:
    if kind == "simplex":
        return regular_simplex(n)[None]
    if kind == "cube":
        # Kuhn triangulation of [-1, 1]^n: one simplex per coordinate order.
        simps = []
        for perm in itertools.permutations(range(n)):
            v = -np.ones(n)
            verts = [v.copy()]
            for axis in perm:
                v[axis] += 2.0
                verts.append(v.copy())
            simps.append(verts)
        return np.array(simps)
    if kind == "cross":
        simps = []
        for signs in itertools.product((1.0, -1.0), repeat=n):
            verts = [np.zeros(n)] + [signs[i] * np.eye(n)[i] for i in range(n)]
            simps.append(verts)
        return np.array(simps)
    raise ValueError(f"{kind} has no triangulation")


@dataclass(frozen=True)
class ConvexBody:
    """Centred reference body: regular simplex (circumradius 1), cube [-1,1]^n,
    unit ball or unit cross-polytope, optionally rescaled."""

    kind: str
    n: int
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in BODY_KINDS:
            raise ValueError(f"unknown body {self.kind!r}; expected one of {BODY_KINDS}")
        if self.n < 1:
            raise ValueError("dimension must be >= 1")

    @property
    def symmetric(self) -> bool:
        return self.kind != "simplex"

    def simplices(self) -> np.ndarray:
        return _triangulation(self.kind, self.n) * self.scale

    def isotropic(self) -> "ConvexBody":
        """Same body rescaled to identity covariance."""
        var = self.marginal_moments(np.eye(self.n)[:1], 2.0)[0]
        return ConvexBody(self.kind, self.n, self.scale / math.sqrt(var))

    def marginal_moments(self, thetas, p: float, signed: bool = False,
                         batch: int = 2048) -> np.ndarray:
        """Exact ``E[|theta.X|^p (sgn)]`` for each row of ``thetas``."""
        thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
        if self.kind == "ball":
            return np.full(len(thetas), _ball_moment(self.n, p, signed) * self.scale ** p)
        simps = self.simplices()
        out = np.empty(len(thetas))
        for start in range(0, len(thetas), batch):
            th = thetas[start:start + batch]
            proj = np.einsum("mvn,dn->dmv", simps, th)
            d, m, nv = proj.shape
            t = _merge_knots(proj.reshape(d * m, nv))
            coeffs = mspline_pieces(t)
            vals = piece_power_integrals(t[:, :-1], t[:, 1:], coeffs, p, signed)
            out[start:start + batch] = vals.reshape(d, m).mean(axis=1)
        return out

    def marginal(self, theta) -> "MarginalDensity":
        theta = np.asarray(theta, dtype=float)
        if self.kind == "ball":
            return BallMarginal(self.n, self.scale)
        parts = [BSplineDensity.from_projections(s @ theta) for s in self.simplices()]
        return SplineMixture(tuple(parts))


def _ball_moment(n: int, p: float, signed: bool) -> float:
    if signed:
        return 0.0
    # density proportional to (1 - x^2)^((n-1)/2) on [-1, 1]
    return float(special.beta((p + 1) / 2, (n + 1) / 2) / special.beta(0.5, (n + 1) / 2))


@dataclass(frozen=True)
class SplineMixture:
    parts: tuple

    @property
    def support(self) -> tuple:
        return (min(p.support[0] for p in self.parts), max(p.support[1] for p in self.parts))

    def pdf(self, x):
        return np.mean([p.pdf(x) for p in self.parts], axis=0)

    def cdf(self, x):
        return np.mean([p.cdf(x) for p in self.parts], axis=0)

    def moment(self, p: float, signed: bool = False) -> float:
        return float(np.mean([d.moment(p, signed) for d in self.parts]))


@dataclass(frozen=True)
class BallMarginal:
    n: int
    scale: float = 1.0

    @property
    def support(self) -> tuple:
        return (-self.scale, self.scale)

    def pdf(self, x):
        x = np.asarray(x, dtype=float) / self.scale
        c = 1.0 / special.beta(0.5, (self.n + 1) / 2)
        return np.where(np.abs(x) <= 1, c * np.clip(1 - x * x, 0, None) ** ((self.n - 1) / 2), 0.0) / self.scale

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float) / self.scale, -1.0, 1.0)
        a = (self.n + 1) / 2
        return special.betainc(a, a, (x + 1) / 2)

    def moment(self, p: float, signed: bool = False) -> float:
        return _ball_moment(self.n, p, signed) * self.scale ** p


MarginalDensity = Union[BSplineDensity, SplineMixture, BallMarginal]


def marginal_moment(d, p: float, signed: bool = False) -> float:
    """Absolute (or signed) p-th moment of a marginal density object."""
    if p < 0:
        raise ValueError("p must be non-negative")
    if isinstance(d, PiecewiseExpDensity):
        return d.expect(_abs_power(p, signed))[0]
    return d.moment(p, signed)


# ---------------------------------------------------------------------------
# Monte Carlo


def _rng(seed_seq: np.random.SeedSequence) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed_seq))


@dataclass(frozen=True)
class BodySampler:
    """Uniform sampler on a reference body, reproducible from ``seed``."""

    kind: str
    n: int
    seed: int = 0
    scale: float = 1.0

    @property
    def body(self) -> ConvexBody:
        return ConvexBody(self.kind, self.n, self.scale)

    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        n = self.n
        if self.kind == "simplex":
            e = rng.standard_exponential((size, n + 1))
            w = e / e.sum(axis=1, keepdims=True)
            pts = w @ regular_simplex(n)
        elif self.kind == "cube":
            pts = rng.uniform(-1.0, 1.0, (size, n))
        elif self.kind == "ball":
            g = rng.standard_normal((size, n))
            g /= np.linalg.norm(g, axis=1, keepdims=True)
            pts = g * rng.random(size)[:, None] ** (1.0 / n)
        else:
            e = rng.standard_exponential((size, n + 1))
            w = e[:, :n] / e.sum(axis=1, keepdims=True)
            signs = rng.choice((-1.0, 1.0), size=(size, n))
            pts = w * signs
        return pts * self.scale

    def chunks(self, total: int, chunk: int):
        """Yield (size, generator) pairs with per-chunk derived seeds."""
        nchunks = max(1, -(-total // chunk))
        children = np.random.SeedSequence(self.seed).spawn(nchunks)
        for i, child in enumerate(children):
            size = min(chunk, total - i * chunk)
            yield size, _rng(child)


@dataclass
class RunningStats:
    """Streaming mean/variance with parallel merge (Chan et al.)."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    def push_array(self, x: np.ndarray) -> None:
        if len(x) == 0:
            return
        other = RunningStats(len(x), float(np.mean(x)), float(np.sum((x - np.mean(x)) ** 2)))
        self.merge(other)

    def merge(self, other: "RunningStats") -> None:
        if other.count == 0:
            return
        n = self.count + other.count
        delta = other.mean - self.mean
        self.mean += delta * other.count / n
        self.m2 += other.m2 + delta * delta * self.count * other.count / n
        self.count = n

    @property
    def variance(self) -> float:
        return self.m2 / (self.count - 1) if self.count > 1 else 0.0

    @property
    def stderr(self) -> float:
        return math.sqrt(self.variance / self.count) if self.count else math.inf


def _power_values(y: np.ndarray, p: float, signed: bool) -> np.ndarray:
    if p == 0:
        return np.sign(y) if signed else np.ones_like(y)
    v = np.abs(y) ** p
    return np.sign(y) * v if signed else v


def mc_marginal_moment(body: BodySampler, theta, p: float, N: int,
                       signed: bool = False, jobs: int = 1,
                       chunk: int = 1 << 16) -> tuple:
    """Monte Carlo ``E[|theta.X|^p (sgn)]`` with standard error.

    Chunks carry their own derived seeds, so the result depends on
    (seed, N, chunk) only, not on ``jobs``.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    theta = np.asarray(theta, dtype=float)

    def work(item):
        size, rng = item
        y = body.sample(size, rng) @ theta
        st = RunningStats()
        st.push_array(_power_values(y, p, signed))
        return st

    items = list(body.chunks(N, chunk))
    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(work, items))
    else:
        parts = [work(it) for it in items]
    total = RunningStats()
    for st in parts:
        total.merge(st)
    return total.mean, total.stderr


def mc_projections(body: BodySampler, theta, N: int, chunk: int = 1 << 16) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    return np.concatenate([body.sample(size, rng) @ theta
                           for size, rng in body.chunks(N, chunk)])


# ---------------------------------------------------------------------------
# export


def density_table(d, xs) -> list:
    xs = np.asarray(xs, dtype=float)
    fx = np.asarray(d.pdf(xs), dtype=float)
    return [(float(x), float(f)) for x, f in zip(xs, fx)]
