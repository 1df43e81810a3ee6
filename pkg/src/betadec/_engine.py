"""Vectorized single-coordinate Metropolis engine shared by all samplers.

All chains evolve together in an (M, d) state array; one sweep proposes a
Gaussian move for each coordinate in turn, vectorized across chains.  The
random inputs are pregenerated in sweep chunks from seeded streams, so a run
is a pure function of (target, initial state, seed) and is bit-identical
regardless of thread count or chunking.  Chains never interact: per-chain
step scales adapt toward the target acceptance rate during the first half of
burn-in (diminishing rate) and are frozen afterwards, leaving a fixed,
valid Metropolis kernel for the second half.

The numba kernels are the default execution path; a pure numpy twin with the
identical operation order (products accumulated left to right) backs the
kernels in tests, and the two must agree bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

try:
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency
    HAVE_NUMBA = False

    def njit(*a, **k):
        def wrap(f):
            return f

        return wrap

    prange = range

TWO_PI = 2.0 * math.pi

# weight kind codes for line matrix-ensemble targets
W_JACOBI, W_LAGUERRE, W_GAUSSIAN = 0, 1, 2
# envelope codes for interlacing targets
ENV_NONE, ENV_EXP, ENV_GAUSS = 0, 1, 2


def mix64(seed: int, salt: int) -> int:
    """SplitMix64-style avalanche mix of a master seed and a stream salt."""
    z = (seed + (salt + 1) * 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    z ^= z >> 31
    return z


@dataclass
class LineMETarget:
    beta: float
    wkind: int
    wa: float = 0.0
    wb: float = 0.0
    wc: float = 1.0


@dataclass
class CircCETarget:
    beta: float
    b: float = 0.0


@dataclass
class LineDATarget:
    """Generalized interlacing target: fixed factor points with exponents,
    per-coordinate gap assignment, optional one-body envelope.

    bounds: (M, nb) strictly decreasing rows, +-inf allowed at the ends;
    epts: (nb,) exponents of |lam - bounds| factors (0 entries are skipped,
    infinite bounds must carry 0); coordinate j lives in gap gap_of[j],
    between bounds columns gap_of[j] and gap_of[j]+1.
    """

    pair_exp: float
    bounds: np.ndarray
    epts: np.ndarray
    gap_of: np.ndarray
    first_in_gap: np.ndarray
    last_in_gap: np.ndarray
    env_kind: int = ENV_NONE
    env_c: float = 0.0


@dataclass
class CircDATarget:
    """Circular interlacing target: arcs between fixed ascending angles
    arc_bounds (0 = first, 2 pi = last); factor points theta_pts with
    exponents epts."""

    pair_exp: float
    arc_bounds: np.ndarray
    theta_pts: np.ndarray
    epts: np.ndarray
    arc_of: np.ndarray
    first_in_arc: np.ndarray
    last_in_arc: np.ndarray


@njit(parallel=True, cache=True)
def _kernel_me(X, LS, Z, E, rates, ta, beta, wkind, wa, wb, wc):
    S, M, d = Z.shape
    for m in prange(M):
        for s in range(S):
            rate = rates[s]
            for j in range(d):
                x = X[m, j]
                p = x + math.exp(LS[m, j]) * Z[s, m, j]
                acc = 0.0
                ok = True
                if wkind == 0:
                    ok = (p > 0.0) and (p < 1.0)
                elif wkind == 1:
                    ok = p > 0.0
                if ok:
                    if wkind == 0:
                        dw = wa * (math.log(p) - math.log(x)) + wb * (
                            math.log1p(-p) - math.log1p(-x)
                        )
                    elif wkind == 1:
                        dw = wa * (math.log(p) - math.log(x)) - wc * (p - x)
                    else:
                        dw = -wc * (p * p - x * x)
                    pn = 1.0
                    po = 1.0
                    for l in range(d):
                        if l != j:
                            pn *= abs(p - X[m, l])
                            po *= abs(x - X[m, l])
                    if po <= 0.0:
                        X[m, j] = p
                        acc = 1.0
                    elif pn > 0.0:
                        dlt = dw + beta * (math.log(pn) - math.log(po))
                        if dlt + E[s, m, j] > 0.0:
                            X[m, j] = p
                            acc = 1.0
                if rate > 0.0:
                    LS[m, j] += rate * (acc - ta)


@njit(parallel=True, cache=True)
def _kernel_ce(X, LS, Z, E, rates, ta, beta, b):
    S, M, d = Z.shape
    for m in prange(M):
        for s in range(S):
            rate = rates[s]
            for j in range(d):
                x = X[m, j]
                p = x + math.exp(LS[m, j]) * Z[s, m, j]
                p = p - math.floor(p / TWO_PI) * TWO_PI
                acc = 0.0
                dw = 0.0
                ok = True
                if b != 0.0:
                    sn = abs(math.sin(0.5 * p))
                    so = abs(math.sin(0.5 * x))
                    if sn <= 0.0:
                        ok = False
                    elif so <= 0.0:
                        X[m, j] = p
                        acc = 1.0
                        ok = False
                    else:
                        dw = b * (math.log(sn) - math.log(so))
                if ok:
                    pn = 1.0
                    po = 1.0
                    for l in range(d):
                        if l != j:
                            pn *= abs(math.sin(0.5 * (p - X[m, l])))
                            po *= abs(math.sin(0.5 * (x - X[m, l])))
                    if po <= 0.0:
                        X[m, j] = p
                        acc = 1.0
                    elif pn > 0.0:
                        dlt = dw + beta * (math.log(pn) - math.log(po))
                        if dlt + E[s, m, j] > 0.0:
                            X[m, j] = p
                            acc = 1.0
                if rate > 0.0:
                    LS[m, j] += rate * (acc - ta)


@njit(parallel=True, cache=True)
def _kernel_da_line(X, LS, Z, E, rates, ta, pair_exp, B, epts, gap_of, first, last,
                    env_kind, env_c):
    S, M, d = Z.shape
    nb = B.shape[1]
    for m in prange(M):
        for s in range(S):
            rate = rates[s]
            for j in range(d):
                x = X[m, j]
                p = x + math.exp(LS[m, j]) * Z[s, m, j]
                g = gap_of[j]
                upper = B[m, g] if first[j] else X[m, j - 1]
                lower = B[m, g + 1] if last[j] else X[m, j + 1]
                acc = 0.0
                if lower < p < upper:
                    dw = 0.0
                    if env_kind == 1:
                        dw = -env_c * (p - x)
                    elif env_kind == 2:
                        dw = -env_c * (p * p - x * x)
                    ok = True
                    for q in range(nb):
                        e = epts[q]
                        if e != 0.0:
                            dn = abs(p - B[m, q])
                            do = abs(x - B[m, q])
                            if dn <= 0.0:
                                ok = False
                                break
                            dw += e * (math.log(dn) - math.log(do))
                    if ok:
                        pn = 1.0
                        po = 1.0
                        for l in range(d):
                            if l != j:
                                pn *= abs(p - X[m, l])
                                po *= abs(x - X[m, l])
                        if po <= 0.0:
                            X[m, j] = p
                            acc = 1.0
                        elif pn > 0.0:
                            dlt = dw + pair_exp * (math.log(pn) - math.log(po))
                            if dlt + E[s, m, j] > 0.0:
                                X[m, j] = p
                                acc = 1.0
                if rate > 0.0:
                    LS[m, j] += rate * (acc - ta)


@njit(parallel=True, cache=True)
def _kernel_da_circ(X, LS, Z, E, rates, ta, pair_exp, T, pts, epts, arc_of, first, last):
    S, M, d = Z.shape
    npts = pts.shape[0]
    for m in prange(M):
        for s in range(S):
            rate = rates[s]
            for j in range(d):
                x = X[m, j]
                p = x + math.exp(LS[m, j]) * Z[s, m, j]
                g = arc_of[j]
                lower = T[g] if first[j] else X[m, j - 1]
                upper = T[g + 1] if last[j] else X[m, j + 1]
                acc = 0.0
                if lower < p < upper:
                    dw = 0.0
                    ok = True
                    for q in range(npts):
                        e = epts[q]
                        if e != 0.0:
                            dn = abs(math.sin(0.5 * (p - pts[q])))
                            do = abs(math.sin(0.5 * (x - pts[q])))
                            if dn <= 0.0:
                                ok = False
                                break
                            dw += e * (math.log(dn) - math.log(do))
                    if ok:
                        pn = 1.0
                        po = 1.0
                        for l in range(d):
                            if l != j:
                                pn *= abs(math.sin(0.5 * (p - X[m, l])))
                                po *= abs(math.sin(0.5 * (x - X[m, l])))
                        if po <= 0.0:
                            X[m, j] = p
                            acc = 1.0
                        elif pn > 0.0:
                            dlt = dw + pair_exp * (math.log(pn) - math.log(po))
                            if dlt + E[s, m, j] > 0.0:
                                X[m, j] = p
                                acc = 1.0
                if rate > 0.0:
                    LS[m, j] += rate * (acc - ta)


def _numpy_chunk(target, X, LS, Z, E, rates, ta):
    """Reference implementation with the same operation order as the kernels."""
    S, M, d = Z.shape
    for s in range(S):
        rate = rates[s]
        for j in range(d):
            x = X[:, j]
            p = x + np.exp(LS[:, j]) * Z[s, :, j]
            acc = np.zeros(M)
            if isinstance(target, LineMETarget):
                if target.wkind == W_JACOBI:
                    ok = (p > 0.0) & (p < 1.0)
                elif target.wkind == W_LAGUERRE:
                    ok = p > 0.0
                else:
                    ok = np.ones(M, dtype=bool)
                dw = np.zeros(M)
                with np.errstate(divide="ignore", invalid="ignore"):
                    if target.wkind == W_JACOBI:
                        dw[ok] = target.wa * (np.log(p[ok]) - np.log(x[ok])) + target.wb * (
                            np.log1p(-p[ok]) - np.log1p(-x[ok])
                        )
                    elif target.wkind == W_LAGUERRE:
                        dw[ok] = target.wa * (np.log(p[ok]) - np.log(x[ok])) - target.wc * (
                            p[ok] - x[ok]
                        )
                    else:
                        dw = -target.wc * (p * p - x * x)
                pn = np.ones(M)
                po = np.ones(M)
                for l in range(d):
                    if l != j:
                        pn = pn * np.abs(p - X[:, l])
                        po = po * np.abs(x - X[:, l])
                beta = target.beta
            elif isinstance(target, CircCETarget):
                p = p - np.floor(p / TWO_PI) * TWO_PI
                ok = np.ones(M, dtype=bool)
                dw = np.zeros(M)
                if target.b != 0.0:
                    sn = np.abs(np.sin(0.5 * p))
                    so = np.abs(np.sin(0.5 * x))
                    ok = sn > 0.0
                    with np.errstate(divide="ignore"):
                        dw = target.b * (np.log(sn) - np.log(so))
                pn = np.ones(M)
                po = np.ones(M)
                for l in range(d):
                    if l != j:
                        pn = pn * np.abs(np.sin(0.5 * (p - X[:, l])))
                        po = po * np.abs(np.sin(0.5 * (x - X[:, l])))
                beta = target.beta
            elif isinstance(target, LineDATarget):
                g = target.gap_of[j]
                upper = target.bounds[:, g] if target.first_in_gap[j] else X[:, j - 1]
                lower = target.bounds[:, g + 1] if target.last_in_gap[j] else X[:, j + 1]
                ok = (p > lower) & (p < upper)
                dw = np.zeros(M)
                if target.env_kind == ENV_EXP:
                    dw = -target.env_c * (p - x)
                elif target.env_kind == ENV_GAUSS:
                    dw = -target.env_c * (p * p - x * x)
                with np.errstate(divide="ignore", invalid="ignore"):
                    for q in range(target.bounds.shape[1]):
                        e = target.epts[q]
                        if e != 0.0:
                            dn = np.abs(p - target.bounds[:, q])
                            do = np.abs(x - target.bounds[:, q])
                            ok = ok & (dn > 0.0)
                            dw = dw + e * (np.log(dn) - np.log(do))
                pn = np.ones(M)
                po = np.ones(M)
                for l in range(d):
                    if l != j:
                        pn = pn * np.abs(p - X[:, l])
                        po = po * np.abs(x - X[:, l])
                beta = target.pair_exp
            else:  # CircDATarget
                g = target.arc_of[j]
                lower = (
                    np.full(M, target.arc_bounds[g])
                    if target.first_in_arc[j]
                    else X[:, j - 1]
                )
                upper = (
                    np.full(M, target.arc_bounds[g + 1])
                    if target.last_in_arc[j]
                    else X[:, j + 1]
                )
                ok = (p > lower) & (p < upper)
                dw = np.zeros(M)
                with np.errstate(divide="ignore", invalid="ignore"):
                    for q in range(len(target.theta_pts)):
                        e = target.epts[q]
                        if e != 0.0:
                            dn = np.abs(np.sin(0.5 * (p - target.theta_pts[q])))
                            do = np.abs(np.sin(0.5 * (x - target.theta_pts[q])))
                            ok = ok & (dn > 0.0)
                            dw = dw + e * (np.log(dn) - np.log(do))
                pn = np.ones(M)
                po = np.ones(M)
                for l in range(d):
                    if l != j:
                        pn = pn * np.abs(np.sin(0.5 * (p - X[:, l])))
                        po = po * np.abs(np.sin(0.5 * (x - X[:, l])))
                beta = target.pair_exp
            with np.errstate(divide="ignore", invalid="ignore"):
                dlt = dw + beta * (np.log(pn) - np.log(po))
            degenerate = ok & (po <= 0.0)
            normal = ok & (po > 0.0) & (pn > 0.0)
            take = degenerate | (normal & (dlt + E[s, :, j] > 0.0))
            X[take, j] = p[take]
            acc[take] = 1.0
            if rate > 0.0:
                LS[:, j] += rate * (acc - ta)


def adaptation_rates(burn_in: int, adaptive: bool) -> np.ndarray:
    """Per-sweep Robbins-Monro rates; zero after burn_in // 2 (frozen kernel)."""
    rates = np.zeros(burn_in)
    if adaptive:
        until = burn_in // 2
        s = np.arange(until)
        rates[:until] = 0.5 / (1.0 + s / 40.0) ** 0.7
    return rates


def run_chains(target, X0: np.ndarray, step0: np.ndarray, burn_in: int, seed: int,
               target_accept: float = 0.44, adaptive: bool = True,
               engine: str = "numba", chunk: int = 16) -> np.ndarray:
    """Run all chains for burn_in sweeps; returns the final states.

    Deterministic given (target, X0, step0, burn_in, seed): the normal and
    exponential variates come from two independent seeded streams consumed in
    a fixed order, so chunking and threading cannot change the result.
    """
    X = np.array(X0, dtype=float)
    M, d = X.shape
    LS = np.log(np.broadcast_to(np.asarray(step0, dtype=float), (M, d))).copy()
    rates = adaptation_rates(burn_in, adaptive)
    gen_z = np.random.Generator(np.random.PCG64(mix64(seed, 0x5EED)))
    gen_e = np.random.Generator(np.random.PCG64(mix64(seed, 0xACCE)))
    done = 0
    while done < burn_in:
        S = min(chunk, burn_in - done)
        Z = gen_z.standard_normal((S, M, d))
        E = gen_e.standard_exponential((S, M, d))
        r = rates[done : done + S]
        if engine == "numba" and HAVE_NUMBA:
            if isinstance(target, LineMETarget):
                _kernel_me(X, LS, Z, E, r, target_accept, target.beta, target.wkind,
                           target.wa, target.wb, target.wc)
            elif isinstance(target, CircCETarget):
                _kernel_ce(X, LS, Z, E, r, target_accept, target.beta, target.b)
            elif isinstance(target, LineDATarget):
                _kernel_da_line(X, LS, Z, E, r, target_accept, target.pair_exp,
                                target.bounds, target.epts, target.gap_of,
                                target.first_in_gap, target.last_in_gap,
                                target.env_kind, target.env_c)
            elif isinstance(target, CircDATarget):
                _kernel_da_circ(X, LS, Z, E, r, target_accept, target.pair_exp,
                                target.arc_bounds, target.theta_pts, target.epts,
                                target.arc_of, target.first_in_arc, target.last_in_arc)
            else:
                raise TypeError(f"unknown target {type(target)}")
        elif engine == "numpy":
            _numpy_chunk(target, X, LS, Z, E, r, target_accept)
        else:
            raise ValueError(f"unknown engine {engine!r}")
        done += S
    return X
