"""Closed-form bounds and limit laws used to check simulation output.

Covers the stationary edge-density bounds of the triadic chain, the
closed form of the corrected (alpha = 2) variant, the triangle lower
bound, and for the affiliation network the expected-degree sandwich, the
compound Poisson degree law with its two-step sampler, and the triangle,
2-path and global clustering asymptotics.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .triadic import TriadicParams

NO_BOUND = None


@dataclass(frozen=True)
class DensityBounds:
    lower: float
    upper: float | None
    regime: str

    @property
    def has_upper(self) -> bool:
        return self.upper is not None

    def contains(self, e: float, slack: float = 0.0) -> bool:
        if e < self.lower - slack:
            return False
        return self.upper is None or e <= self.upper + slack


def density_bounds(params: TriadicParams, n: int) -> DensityBounds:
    """Lower and upper bounds on the stationary mean edge density.

    The upper bound is the smaller of the two that apply: one needs
    ``alpha, beta >= 2``, the other ``alpha, beta >= 1`` and
    ``lambda0 + mu0 > max(lam, mu)``.  ``upper`` is None when neither holds.
    """
    if params.variant not in ("simplified", "independent", "general") or params.per_vertex:
        raise ValueError("density bounds need scalar lambda0/mu0 rates")
    l0, m0 = params.lambda0, params.mu0
    top = max(params.lam, params.mu)
    lower = l0 / (l0 + m0)
    if top == 0:
        return DensityBounds(lower, lower, "independent")
    tau = min(params.alpha, params.beta)
    candidates = []
    if tau >= 2:
        candidates.append(((l0 + top / (n - 1)) / (l0 + m0), "tau>=2"))
    if tau >= 1 and l0 + m0 > top:
        candidates.append((l0 / (l0 + m0 - top), "tau>=1"))
    if not candidates:
        return DensityBounds(lower, NO_BOUND, "none")
    upper, regime = min(candidates)
    return DensityBounds(lower, upper, regime)


def density_closed_form_alpha2(lambda0: float, mu0: float, lam: float, n: int,
                               cl_bar: float) -> float:
    """Stationary mean edge density of the corrected variant given mean local clustering."""
    if not 0.0 <= cl_bar <= 1.0:
        raise ValueError(f"mean local clustering must lie in [0, 1], got {cl_bar}")
    return (lambda0 + 2.0 * lam / (n - 1) * (1.0 - cl_bar)) / (lambda0 + mu0)


def triangle_lower_bound(lambda0: float, mu0: float, lam: float, p_deg_ge2: float) -> float:
    """Lower bound on the mean number of triangles at a vertex (needs 0 < alpha <= 2)."""
    if not 0.0 <= p_deg_ge2 <= 1.0:
        raise ValueError("p_deg_ge2 must be a probability")
    return lam / (4.0 * (lambda0 + mu0 + lam)) * p_deg_ge2


# --------------------------------------------------------------------------
# affiliation network

@dataclass(frozen=True)
class MomentSummary:
    """Weight moments of an affiliation network.

    ``x_moments[s-1]`` is the mean of ``x_u ** s`` (s = 1..5), and
    ``y_moments[s-1]`` the mean of ``y_i ** s`` (s = 1..4).
    """

    n: int
    m: int
    mu: float
    x_moments: tuple[float, ...]
    y_moments: tuple[float, ...]

    @classmethod
    def from_weights(cls, y: Sequence[float], x: Sequence[float], mu: float | None = None):
        y = np.asarray(y, dtype=float)
        x = np.asarray(x, dtype=float)
        n, m = y.size, x.size
        if mu is None:
            mu = math.sqrt(n * m)
        return cls(n, m, float(mu),
                   tuple(float(np.mean(x ** s)) for s in range(1, 6)),
                   tuple(float(np.mean(y ** s)) for s in range(1, 5)))

    @classmethod
    def unit(cls, n: int, m: int, mu: float | None = None):
        return cls(n, m, math.sqrt(n * m) if mu is None else mu, (1.0,) * 5, (1.0,) * 4)

    def x(self, s: int) -> float:
        return self.x_moments[s - 1]

    def y(self, s: int) -> float:
        return self.y_moments[s - 1]

    @property
    def gamma(self) -> float:
        return math.sqrt(self.m / self.n)

    @property
    def kappa(self) -> float:
        return self.n * self.m / self.mu ** 2


def expected_degree_bounds(y_i: float, summary: MomentSummary) -> tuple[float, float]:
    """Sandwich for the expected projected degree of an actor with weight ``y_i``."""
    s = summary
    k = s.kappa
    upper = y_i * k * s.x(2) * s.y(1)
    gap = (k / s.mu * y_i * (s.x(3) * s.y(2) + y_i * s.x(3) * s.y(1))
           + k ** 2 / s.n * y_i ** 2 * s.x(2) ** 2 * s.y(2)
           + y_i * s.x(2) / s.n)
    return max(upper - gap, 0.0), upper


@dataclass(frozen=True)
class CompoundPoissonSpec:
    """Limit degree law of an actor with weight ``y_i``.

    ``support``/``probs`` describe the attribute-weight law ``P_X`` as a
    finite weighted list; ``a_x`` defaults to its mean.  ``gamma_o`` is the
    limit of ``sqrt(m / n)``.
    """

    y_i: float
    a_y: float
    gamma_o: float
    support: tuple[float, ...]
    probs: tuple[float, ...]
    a_x: float | None = None

    def __post_init__(self):
        if self.gamma_o <= 0:
            raise ValueError("gamma_o must be positive")
        if len(self.support) != len(self.probs) or not self.support:
            raise ValueError("support and probs must be non-empty and of equal length")
        p = np.asarray(self.probs, dtype=float)
        if np.any(p < 0) or not math.isclose(p.sum(), 1.0, rel_tol=0, abs_tol=1e-9):
            raise ValueError("probs must be a probability vector")
        mean = float(np.dot(self.support, p))
        if self.a_x is None:
            object.__setattr__(self, "a_x", mean)
        elif not math.isclose(self.a_x, mean, rel_tol=1e-9):
            raise ValueError(f"a_x={self.a_x} does not match the mean of P_X ({mean})")
        if self.a_x <= 0:
            raise ValueError("P_X must have positive mean")

    @classmethod
    def from_values(cls, y_i: float, a_y: float, gamma_o: float, values: Sequence[float]):
        """Empirical ``P_X`` from a list of attribute weights."""
        vals, counts = np.unique(np.asarray(values, dtype=float), return_counts=True)
        probs = counts / counts.sum()
        return cls(y_i, a_y, gamma_o, tuple(vals.tolist()), tuple(probs.tolist()))

    def rate(self, s: float) -> float:
        return s * self.a_y / self.gamma_o

    @property
    def outer_rate(self) -> float:
        """Mean number of Poisson jumps, ``y_i * a_x * gamma_o``."""
        return self.y_i * self.a_x * self.gamma_o

    def size_biased(self) -> tuple[np.ndarray, np.ndarray]:
        s = np.asarray(self.support, dtype=float)
        w = s * np.asarray(self.probs, dtype=float) / self.a_x
        return s, w / w.sum()

    def q_mean(self) -> float:
        s, w = self.size_biased()
        return float(np.dot(w, s * self.a_y / self.gamma_o))


def poisson_logpmf(t: int, lam: float) -> float:
    if lam == 0:
        return 0.0 if t == 0 else -math.inf
    return t * math.log(lam) - lam - math.lgamma(t + 1)


def cp_pmf_Q(t: int, spec: CompoundPoissonSpec) -> float:
    """Mass of the size-biased Poisson mixture ``Q`` at ``t``."""
    if t < 0:
        return 0.0
    total = 0.0
    for s, p in zip(spec.support, spec.probs):
        if p == 0 or s == 0:
            continue
        total += s / spec.a_x * p * math.exp(poisson_logpmf(t, spec.rate(s)))
    return total


def q_pmf_vector(spec: CompoundPoissonSpec, tol: float = 1e-14) -> np.ndarray:
    """``Q(0..T)`` with ``T`` large enough that the tail mass is below ``tol``."""
    vals = []
    mass = 0.0
    t = 0
    lam_max = max(spec.rate(s) for s in spec.support)
    while True:
        q = cp_pmf_Q(t, spec)
        vals.append(q)
        mass += q
        if t > lam_max and 1.0 - mass < tol:
            break
        t += 1
        if t > 10_000:
            break
    return np.array(vals)


def cp_pmf(spec: CompoundPoissonSpec, tmax: int | None = None, tol: float = 1e-12) -> np.ndarray:
    """pmf of ``CP(y_i a_x gamma_o, Q)`` on ``0..tmax`` via Panjer's recursion."""
    q = q_pmf_vector(spec)
    lam = spec.outer_rate
    if tmax is None:
        mean = lam * spec.q_mean()
        tmax = int(mean + 12 * math.sqrt(max(mean, 1.0) * (1 + len(q))) + 20)
    g = np.zeros(tmax + 1)
    qq = np.zeros(tmax + 1)
    qq[:min(len(q), tmax + 1)] = q[:tmax + 1]
    g[0] = math.exp(-lam * (1.0 - qq[0]))
    for k in range(1, tmax + 1):
        j = np.arange(1, k + 1)
        g[k] = lam / k * np.dot(j * qq[j], g[k - j])
    return g


def cp_degree_sampler(spec: CompoundPoissonSpec, rng: np.random.Generator,
                      size: int | None = None):
    """Draw from the compound Poisson degree law in two steps.

    A Poisson number of attributes is drawn with mean ``y_i a_x gamma_o``;
    each contributes a Poisson count whose rate is ``X a_y / gamma_o`` for a
    size-biased attribute weight ``X``.
    """
    s, w = spec.size_biased()
    count = 1 if size is None else size
    jumps = rng.poisson(spec.outer_rate, size=count)
    total_jumps = int(jumps.sum())
    xs = rng.choice(s, size=total_jumps, p=w)
    contrib = rng.poisson(xs * spec.a_y / spec.gamma_o)
    owner = np.repeat(np.arange(count), jumps)
    out = np.bincount(owner, weights=contrib, minlength=count).astype(np.int64)
    return int(out[0]) if size is None else out


def projection_asymptotics(summary: MomentSummary,
                           gamma_o: float | None = None) -> tuple[float, float, float]:
    """Predicted triangle count, 2-path count and global clustering of the projection.

    Assumes ``mu = sqrt(n m)``.  ``gamma_o`` defaults to ``sqrt(m / n)``.
    """
    s = summary
    g = s.gamma
    go = g if gamma_o is None else gamma_o
    a = s.x(3) * s.y(1) ** 3
    b = s.x(2) ** 2 * s.y(2) * s.y(1) ** 2
    n_tri = s.n / (6 * g) * a
    n_2p = s.n / (2 * g) * a + s.n / 2 * b
    cgl = a / (a + go * b)
    return n_tri, n_2p, cgl
