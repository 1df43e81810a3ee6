"""Samplers: constrained random-walk MCMC for all densities, plus the Gaussian
tridiagonal matrix model and a symmetric-tridiagonal eigensolver.

Independence strategy: every retained draw is the final state of its own
chain after burn-in, so rows of a SampleBatch are independent and the
downstream KS tests see i.i.d. samples.  Runs are deterministic for a fixed
(spec, config, master_seed): chain randomness comes from streams derived
from the master seed with a SplitMix64 avalanche (see `_engine.mix64`);
bit-exactness is guaranteed within this implementation only, statistical
reproducibility in general.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
import scipy.linalg

from . import _engine
from ._engine import (
    ENV_EXP,
    ENV_GAUSS,
    ENV_NONE,
    CircCETarget,
    CircDATarget,
    LineDATarget,
    LineMETarget,
    W_GAUSSIAN,
    W_JACOBI,
    W_LAGUERRE,
    mix64,
)
from .density import CircDAParams, CircularSpec, DAParams, EnsembleSpec, Weight

__all__ = [
    "ChainConfig",
    "SampleBatch",
    "TridiagMatrix",
    "sample_me",
    "sample_ce",
    "sample_da",
    "sample_gaussian_tridiag",
    "tridiag_eigenvalues",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ChainConfig:
    """MCMC controls: one retained draw per chain."""

    burn_in_sweeps: int = 5000
    step_scale: Union[float, str] = "adaptive"
    chains: int = 1024
    target_accept: float = 0.44
    engine: str = "numba"

    def __post_init__(self):
        if self.burn_in_sweeps < 1:
            raise ValueError("burn_in_sweeps must be at least 1")
        if self.chains < 1:
            raise ValueError("chains must be at least 1")
        if not (0.0 < self.target_accept < 1.0):
            raise ValueError("target_accept must lie in (0, 1)")
        if isinstance(self.step_scale, str):
            if self.step_scale != "adaptive":
                raise ValueError("step_scale must be a positive real or 'adaptive'")
        elif not self.step_scale > 0.0:
            raise ValueError("step_scale must be a positive real or 'adaptive'")

    def fingerprint(self) -> str:
        return (
            f"chains={self.chains},burn={self.burn_in_sweeps},"
            f"step={self.step_scale},ta={self.target_accept}"
        )


@dataclass
class SampleBatch:
    """M independent configurations, one per row, in canonical order
    (descending for line ensembles, ascending in (0, 2 pi) for circular)."""

    values: np.ndarray
    spec_fingerprint: str
    master_seed: int
    config: ChainConfig
    ascending: bool = False

    @property
    def chains(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class TridiagMatrix:
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        diag = np.asarray(self.diag, dtype=float)
        off = np.asarray(self.offdiag, dtype=float)
        if diag.size == 0:
            raise ValueError("matrix must be nonempty")
        if off.size != diag.size - 1:
            raise ValueError("offdiag must have length len(diag) - 1")
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", off)


def _steps(config: ChainConfig, natural: np.ndarray) -> tuple[np.ndarray, bool]:
    if config.step_scale == "adaptive":
        return natural, True
    return np.broadcast_to(float(config.step_scale), natural.shape).copy(), False


def sample_me(spec: EnsembleSpec, config: ChainConfig, master_seed: int) -> SampleBatch:
    """Draws from the line ensemble; rows sorted descending."""
    M, d = config.chains, spec.N
    w = spec.weight
    gen = np.random.Generator(np.random.PCG64(mix64(master_seed, 0x1117)))
    if w.kind == "jacobi":
        X0 = gen.beta(w.a + 1.0, w.b + 1.0, (M, d))
        natural = np.full((M, d), 0.25)
        target = LineMETarget(spec.beta, W_JACOBI, wa=w.a, wb=w.b)
    elif w.kind == "laguerre":
        X0 = gen.gamma(w.a + 1.0, 1.0 / w.c, (M, d))
        natural = np.full((M, d), 0.5 * math.sqrt(w.a + 1.0) / w.c + 0.5 / w.c)
        target = LineMETarget(spec.beta, W_LAGUERRE, wa=w.a, wc=w.c)
    else:
        sigma = math.sqrt(0.5 / w.c)
        X0 = gen.normal(0.0, sigma, (M, d))
        natural = np.full((M, d), sigma)
        target = LineMETarget(spec.beta, W_GAUSSIAN, wc=w.c)
    X0 = np.sort(X0, axis=1)[:, ::-1].copy()
    step0, adaptive = _steps(config, natural)
    X = _engine.run_chains(target, X0, step0, config.burn_in_sweeps,
                           mix64(master_seed, 0x2229), config.target_accept,
                           adaptive, config.engine)
    X = np.sort(X, axis=1)[:, ::-1]
    return SampleBatch(np.ascontiguousarray(X), spec.fingerprint(), master_seed, config)


def sample_ce(spec: CircularSpec, config: ChainConfig, master_seed: int) -> SampleBatch:
    """Draws from the circular ensemble; rows sorted ascending in (0, 2 pi)."""
    M, d = config.chains, spec.N
    gen = np.random.Generator(np.random.PCG64(mix64(master_seed, 0x1117)))
    X0 = np.sort(gen.random((M, d)) * TWO_PI, axis=1)
    natural = np.full((M, d), math.pi / (d + 1))
    step0, adaptive = _steps(config, natural)
    target = CircCETarget(spec.beta, spec.b)
    X = _engine.run_chains(target, X0, step0, config.burn_in_sweeps,
                           mix64(master_seed, 0x2229), config.target_accept,
                           adaptive, config.engine)
    X = np.sort(X, axis=1)
    return SampleBatch(np.ascontiguousarray(X), spec.fingerprint(), master_seed, config,
                       ascending=True)


def _line_da_target(r: int, bounds: np.ndarray, epts: np.ndarray,
                    env_kind: int = ENV_NONE, env_c: float = 0.0) -> LineDATarget:
    """Generalized line interlacing target with r coordinates per gap."""
    nb = bounds.shape[1]
    ngap = nb - 1
    d = r * ngap
    gap_of = np.repeat(np.arange(ngap), r).astype(np.int64)
    pos = np.tile(np.arange(r), ngap)
    return LineDATarget(
        pair_exp=2.0 / (r + 1),
        bounds=np.ascontiguousarray(bounds, dtype=float),
        epts=np.asarray(epts, dtype=float),
        gap_of=gap_of,
        first_in_gap=(pos == 0),
        last_in_gap=(pos == r - 1),
        env_kind=env_kind,
        env_c=env_c,
    ) if d > 0 else None


def _init_line_da(gen, r: int, bounds: np.ndarray, env_c: float) -> tuple[np.ndarray, np.ndarray]:
    """Per-gap overdispersed ordered starts and natural step scales."""
    M, nb = bounds.shape
    ngap = nb - 1
    blocks = []
    steps = []
    for g in range(ngap):
        hi = bounds[:, g]
        lo = bounds[:, g + 1]
        scale = 1.0 / env_c if env_c > 0.0 else 1.0
        if np.isinf(hi[0]) and np.isinf(lo[0]):
            blk = gen.normal(0.0, math.sqrt(scale), (M, r))
            stp = np.full((M, r), 0.5 * math.sqrt(scale))
        elif np.isinf(hi[0]):
            blk = lo[:, None] + gen.exponential(scale, (M, r))
            stp = np.full((M, r), 0.5 * scale)
        elif np.isinf(lo[0]):
            blk = hi[:, None] - gen.exponential(scale, (M, r))
            stp = np.full((M, r), 0.5 * scale)
        else:
            width = (hi - lo)[:, None]
            blk = lo[:, None] + width * gen.random((M, r))
            stp = np.broadcast_to(width / (r + 2), (M, r)).copy()
        blocks.append(np.sort(blk, axis=1)[:, ::-1])
        steps.append(stp)
    return np.concatenate(blocks, axis=1), np.concatenate(steps, axis=1)


def _sample_da_line_batched(r: int, bounds: np.ndarray, epts: np.ndarray,
                            env_kind: int, env_c: float, config: ChainConfig,
                            master_seed: int, fingerprint: str) -> SampleBatch:
    target = _line_da_target(r, bounds, epts, env_kind, env_c)
    gen = np.random.Generator(np.random.PCG64(mix64(master_seed, 0x1117)))
    X0, natural = _init_line_da(gen, r, bounds, env_c if env_kind != ENV_NONE else 0.0)
    step0, adaptive = _steps(config, natural)
    X = _engine.run_chains(target, X0, step0, config.burn_in_sweeps,
                           mix64(master_seed, 0x2229), config.target_accept,
                           adaptive, config.engine)
    return SampleBatch(np.ascontiguousarray(X), fingerprint, master_seed, config)


def sample_da(params: Union[DAParams, CircDAParams], config: ChainConfig,
              master_seed: int) -> SampleBatch:
    """Draws from the interlacing conditional density; every row satisfies the
    interlacing constraint (off-region proposals are rejected)."""
    M = config.chains
    if isinstance(params, DAParams):
        bounds = np.broadcast_to(params.a, (M, params.n)).copy()
        return _sample_da_line_batched(params.r, bounds, params.s - 1.0, ENV_NONE, 0.0,
                                       config, master_seed, params.fingerprint())
    if not isinstance(params, CircDAParams):
        raise TypeError("params must be DAParams or CircDAParams")
    r, n = params.r, params.n
    arc_bounds = np.concatenate(([0.0], params.theta))
    arc_of = np.repeat(np.arange(n), r).astype(np.int64)
    pos = np.tile(np.arange(r), n)
    target = CircDATarget(
        pair_exp=2.0 / (r + 1),
        arc_bounds=arc_bounds,
        theta_pts=params.theta,
        epts=params.alpha - 1.0,
        arc_of=arc_of,
        first_in_arc=(pos == 0),
        last_in_arc=(pos == r - 1),
    )
    gen = np.random.Generator(np.random.PCG64(mix64(master_seed, 0x1117)))
    blocks = []
    steps = []
    for g in range(n):
        lo, hi = arc_bounds[g], arc_bounds[g + 1]
        blk = np.sort(lo + (hi - lo) * gen.random((M, r)), axis=1)
        blocks.append(blk)
        steps.append(np.full((M, r), (hi - lo) / (r + 2)))
    X0 = np.concatenate(blocks, axis=1)
    step0, adaptive = _steps(config, np.concatenate(steps, axis=1))
    X = _engine.run_chains(target, X0, step0, config.burn_in_sweeps,
                           mix64(master_seed, 0x2229), config.target_accept,
                           adaptive, config.engine)
    return SampleBatch(np.ascontiguousarray(X), params.fingerprint(), master_seed, config,
                       ascending=True)


def sample_gaussian_tridiag(beta: float, N: int, count: int, master_seed: int) -> SampleBatch:
    """Eigenvalue draws from the Gaussian tridiagonal matrix model.

    Diagonal entries are standard normal; the k-th off-diagonal entry (from
    the top, k = 1..N-1) is the square root of a Gamma((N-k) beta / 2, 1)
    variate.  The eigenvalue density is the line ensemble with weight
    e^{-x^2/2} at the same beta.  Rows sorted descending.
    """
    if beta <= 0.0:
        raise ValueError("beta must be positive")
    if N < 1:
        raise ValueError("N must be a positive integer")
    if count < 1:
        raise ValueError("count must be a positive integer")
    gen = np.random.Generator(np.random.PCG64(mix64(master_seed, 0x7417)))
    diag = gen.standard_normal((count, N))
    mats = np.zeros((count, N, N))
    idx = np.arange(N)
    mats[:, idx, idx] = diag
    if N > 1:
        shapes = (N - np.arange(1, N)) * beta / 2.0
        off = np.sqrt(gen.gamma(shapes, 1.0, (count, N - 1)))
        j = np.arange(N - 1)
        mats[:, j, j + 1] = off
        mats[:, j + 1, j] = off
    eigs = np.linalg.eigvalsh(mats)
    eigs = eigs[:, ::-1]
    config = ChainConfig(burn_in_sweeps=1, chains=count)
    fp = f"tridiag:beta={beta!r},N={N}"
    return SampleBatch(np.ascontiguousarray(eigs), fp, master_seed, config)


def tridiag_eigenvalues(m: TridiagMatrix) -> np.ndarray:
    """Eigenvalues of a symmetric tridiagonal matrix, ascending; absolute
    accuracy 1e-12 * max(1, spectral radius)."""
    if m.diag.size == 1:
        return m.diag.copy()
    return scipy.linalg.eigh_tridiagonal(m.diag, m.offdiag, eigvals_only=True)
