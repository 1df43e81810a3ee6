"""Log-densities for line/circular beta ensembles and interlacing conditional laws.

Ensemble densities are unnormalized (their constants are unknown in general
and never needed: MCMC and ratio tests cancel them).  The interlacing
conditional densities are normalized, using the closed-form constants from
`specfun`.  All support violations, including coincident coordinates and
broken interlacing, return exactly -inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import specfun

__all__ = [
    "Weight",
    "EnsembleSpec",
    "CircularSpec",
    "DAParams",
    "CircDAParams",
    "interlaces_line",
    "interlaces_circle",
    "log_density_me",
    "log_density_ce",
    "log_density_da",
    "log_density_cda",
    "log_density_superposition",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Weight:
    """One-body weight g(x): jacobi x^a (1-x)^b on (0,1), laguerre x^a e^{-cx}
    on (0,inf), or gaussian e^{-c x^2} on R."""

    kind: str
    a: float = 0.0
    b: float = 0.0
    c: float = 1.0

    def __post_init__(self):
        if self.kind == "jacobi":
            if not (self.a > -1.0 and self.b > -1.0):
                raise ValueError("jacobi weight needs a > -1 and b > -1")
        elif self.kind == "laguerre":
            if not (self.a > -1.0 and self.c > 0.0):
                raise ValueError("laguerre weight needs a > -1 and c > 0")
        elif self.kind == "gaussian":
            if not self.c > 0.0:
                raise ValueError("gaussian weight needs c > 0")
        else:
            raise ValueError(f"unknown weight kind {self.kind!r}")

    @staticmethod
    def jacobi(a: float, b: float) -> "Weight":
        return Weight("jacobi", a=a, b=b)

    @staticmethod
    def laguerre(a: float, c: float = 1.0) -> "Weight":
        return Weight("laguerre", a=a, c=c)

    @staticmethod
    def gaussian(c: float = 1.0) -> "Weight":
        return Weight("gaussian", c=c)

    def log_g(self, x: np.ndarray) -> np.ndarray:
        """Elementwise ln g(x); -inf outside the support."""
        x = np.asarray(x, dtype=float)
        out = np.full(x.shape, -np.inf)
        with np.errstate(divide="ignore", invalid="ignore"):
            if self.kind == "jacobi":
                ok = (x > 0.0) & (x < 1.0)
                out[ok] = self.a * np.log(x[ok]) + self.b * np.log1p(-x[ok])
            elif self.kind == "laguerre":
                ok = x > 0.0
                out[ok] = self.a * np.log(x[ok]) - self.c * x[ok]
            else:
                out = -self.c * x * x
        return out

    def fingerprint(self) -> str:
        return f"{self.kind}(a={self.a!r},b={self.b!r},c={self.c!r})"


@dataclass(frozen=True)
class EnsembleSpec:
    """Line ensemble: density prop. to prod g(x_l) prod_{j<k} |x_k - x_j|^beta."""

    beta: float
    N: int
    weight: Weight

    def __post_init__(self):
        if self.beta <= 0.0:
            raise ValueError("beta must be positive")
        if self.N < 1:
            raise ValueError("N must be a positive integer")

    def fingerprint(self) -> str:
        return f"me:beta={self.beta!r},N={self.N},w={self.weight.fingerprint()}"


@dataclass(frozen=True)
class CircularSpec:
    """Circular ensemble: prod |1-e^{i theta_l}|^b prod_{j<k} |e^{i theta_k}-e^{i theta_j}|^beta."""

    beta: float
    N: int
    b: float = 0.0

    def __post_init__(self):
        if self.beta <= 0.0:
            raise ValueError("beta must be positive")
        if self.N < 1:
            raise ValueError("N must be a positive integer")
        if self.b < 0.0:
            raise ValueError("b must be nonnegative")

    def fingerprint(self) -> str:
        return f"ce:beta={self.beta!r},N={self.N},b={self.b!r}"


@dataclass(frozen=True)
class DAParams:
    """Parameters of the line interlacing conditional density: r points per gap
    between n fixed, strictly decreasing endpoints a_1 > ... > a_n carrying
    exponents s_p > 0."""

    r: int
    n: int
    a: np.ndarray = field(repr=False)
    s: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("r must be a positive integer")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        a = np.asarray(self.a, dtype=float)
        s = np.asarray(self.s, dtype=float)
        if a.shape != (self.n,) or s.shape != (self.n,):
            raise ValueError("a and s must both have length n")
        if not np.all(np.diff(a) < 0.0):
            raise ValueError("a must be strictly decreasing")
        if np.any(s <= 0.0):
            raise ValueError("all s_p must be positive")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "s", s)

    @property
    def dim(self) -> int:
        return self.r * (self.n - 1)

    def fingerprint(self) -> str:
        return f"da:r={self.r},n={self.n},a={self.a.tolist()!r},s={self.s.tolist()!r}"


@dataclass(frozen=True)
class CircDAParams:
    """Circular analogue: r angles per arc between fixed angles
    0 < theta_1 < ... < theta_n = 2 pi with exponents alpha_p > 0."""

    r: int
    n: int
    theta: np.ndarray = field(repr=False)
    alpha: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("r must be a positive integer")
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        theta = np.asarray(self.theta, dtype=float)
        alpha = np.asarray(self.alpha, dtype=float)
        if theta.shape != (self.n,) or alpha.shape != (self.n,):
            raise ValueError("theta and alpha must both have length n")
        if not (theta[0] > 0.0 and np.all(np.diff(theta) > 0.0)):
            raise ValueError("theta must be strictly increasing in (0, 2pi]")
        if not math.isclose(theta[-1], TWO_PI, rel_tol=0.0, abs_tol=1e-12):
            raise ValueError("theta_n must equal 2 pi")
        if np.any(alpha <= 0.0):
            raise ValueError("all alpha_p must be positive")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "alpha", alpha)

    @property
    def dim(self) -> int:
        return self.r * self.n

    def fingerprint(self) -> str:
        return (
            f"cda:r={self.r},n={self.n},theta={self.theta.tolist()!r},"
            f"alpha={self.alpha.tolist()!r}"
        )


def _check_vector(x, length: int, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (length,):
        raise ValueError(f"{name} must have length {length}, got shape {x.shape}")
    if np.any(np.isnan(x)):
        raise ValueError(f"{name} contains NaN")
    return x


def interlaces_line(params: DAParams, lam) -> bool:
    """True iff gap j holds exactly the r values lam[r(j-1):rj], strictly
    ordered a_j > lam_{r(j-1)+1} > ... > lam_{rj} > a_{j+1} for every gap."""
    lam = _check_vector(lam, params.dim, "lam")
    # Interleave endpoints and gap blocks; the region is exactly "the merged
    # sequence is strictly decreasing".
    merged = np.empty(params.n + params.dim)
    pos = 0
    for j in range(params.n - 1):
        merged[pos] = params.a[j]
        pos += 1
        merged[pos : pos + params.r] = lam[j * params.r : (j + 1) * params.r]
        pos += params.r
    merged[pos] = params.a[-1]
    return bool(np.all(np.diff(merged) < 0.0))


def interlaces_circle(params: CircDAParams, psi) -> bool:
    """True iff arc j = (theta_{j-1}, theta_j) holds exactly the r ascending
    values psi[r(j-1):rj], with theta_0 = 0."""
    psi = _check_vector(psi, params.dim, "psi")
    merged = np.empty(params.n + params.dim + 1)
    merged[0] = 0.0
    pos = 1
    for j in range(params.n):
        merged[pos : pos + params.r] = psi[j * params.r : (j + 1) * params.r]
        pos += params.r
        merged[pos] = params.theta[j]
        pos += 1
    return bool(np.all(np.diff(merged) > 0.0))


def _log_vandermonde(x: np.ndarray, power: float) -> float:
    """power * sum_{j<k} ln |x_j - x_k|; -inf on any coincidence."""
    n = len(x)
    if n < 2:
        return 0.0
    diffs = np.abs(x[:, None] - x[None, :])[np.triu_indices(n, k=1)]
    if np.any(diffs == 0.0):
        return -np.inf
    return power * float(np.sum(np.log(diffs)))


def _log_circ_vandermonde(theta: np.ndarray, power: float) -> float:
    """power * sum_{j<k} ln |e^{i theta_j} - e^{i theta_k}|; -inf on coincidence mod 2pi."""
    n = len(theta)
    if n < 2:
        return 0.0
    d = np.abs(2.0 * np.sin(0.5 * (theta[:, None] - theta[None, :])))[np.triu_indices(n, k=1)]
    if np.any(d == 0.0):
        return -np.inf
    return power * float(np.sum(np.log(d)))


def log_density_me(spec: EnsembleSpec, x) -> float:
    """Unnormalized log density sum_l ln g(x_l) + beta sum_{j<k} ln |x_k - x_j|."""
    x = _check_vector(x, spec.N, "x")
    lg = spec.weight.log_g(x)
    if np.any(np.isinf(lg)):
        return -np.inf
    pair = _log_vandermonde(x, spec.beta)
    if pair == -np.inf:
        return -np.inf
    return float(np.sum(lg)) + pair


def log_density_ce(spec: CircularSpec, theta) -> float:
    """Unnormalized circular log density; angles are canonicalized mod 2pi."""
    theta = _check_vector(theta, spec.N, "theta")
    theta = np.mod(theta, TWO_PI)
    one_body = 0.0
    if spec.b != 0.0:
        d = np.abs(2.0 * np.sin(0.5 * theta))
        if np.any(d == 0.0):
            return -np.inf
        one_body = spec.b * float(np.sum(np.log(d)))
    pair = _log_circ_vandermonde(theta, spec.beta)
    if pair == -np.inf:
        return -np.inf
    return one_body + pair


def log_density_da(params: DAParams, lam) -> float:
    """Normalized log density of the line interlacing conditional law.

    -ln C_hat + (2/(r+1)) sum_{j<k} ln(lam_j - lam_k)
    - sum_{j<k} r (s_j + s_k - 2/(r+1)) ln(a_j - a_k)
    + sum_j sum_p (s_p - 1) ln |lam_j - a_p|,
    restricted to the interlaced region (else -inf).
    """
    lam = _check_vector(lam, params.dim, "lam")
    if not interlaces_line(params, lam):
        return -np.inf
    r, n, a, s = params.r, params.n, params.a, params.s
    val = -specfun.da_norm_log(r, n, s)
    val += _log_vandermonde(lam, 2.0 / (r + 1))
    for j in range(n):
        for k in range(j + 1, n):
            val -= r * (s[j] + s[k] - 2.0 / (r + 1)) * math.log(a[j] - a[k])
    cross = np.abs(lam[:, None] - a[None, :])
    if np.any(cross == 0.0):
        return -np.inf
    val += float(np.sum((s[None, :] - 1.0) * np.log(cross)))
    return val


def log_density_cda(params: CircDAParams, psi) -> float:
    """Normalized log density of the circular interlacing conditional law."""
    psi = _check_vector(psi, params.dim, "psi")
    if not interlaces_circle(params, psi):
        return -np.inf
    r, n, theta, alpha = params.r, params.n, params.theta, params.alpha
    val = -specfun.circ_norm_log(r, n, alpha)
    val += _log_circ_vandermonde(psi, 2.0 / (r + 1))
    for j in range(n):
        for k in range(j + 1, n):
            d = abs(2.0 * math.sin(0.5 * (theta[j] - theta[k])))
            val -= r * (alpha[j] + alpha[k] - 2.0 / (r + 1)) * math.log(d)
    cross = np.abs(2.0 * np.sin(0.5 * (psi[:, None] - theta[None, :])))
    if np.any(cross == 0.0):
        return -np.inf
    val += float(np.sum((alpha[None, :] - 1.0) * np.log(cross)))
    return val


def log_density_superposition(f_weight: Weight, sizes: tuple[int, int], x, kind: str) -> float:
    """Unnormalized log density of a superimposed pair of beta=1 ensembles.

    kind "odd_even_unequal" (m = n+1, 2n+1 points, sorted descending):
        sum_l ln f(x_l) + sum_{j<k} ln(x_{2j-1} - x_{2k-1})
                        + sum_{j<k} ln(x_{2j} - x_{2k})
    kind "odd_even_equal" (m = n, 2n points): same two index-parity products.
    """
    n, m = sizes
    if kind == "odd_even_unequal":
        if m != n + 1:
            raise ValueError("odd_even_unequal requires m = n + 1")
    elif kind == "odd_even_equal":
        if m != n:
            raise ValueError("odd_even_equal requires m = n")
    else:
        raise ValueError(f"unknown kind {kind!r}")
    x = _check_vector(x, n + m, "x")
    if len(x) > 1 and not np.all(np.diff(x) < 0.0):
        return -np.inf
    lg = f_weight.log_g(x)
    if np.any(np.isinf(lg)):
        return -np.inf
    odd = x[0::2]
    even = x[1::2]
    return float(np.sum(lg)) + _log_vandermonde(odd, 1.0) + _log_vandermonde(even, 1.0)
