"""Decimation and superposition operators on ordered eigenvalue configurations.

Line configurations are ordered descending (positions count from the largest
value); circular configurations ascend in (0, 2 pi) (positions count from the
smallest angle above 0, the location of the one-body singularity).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["OrderedConfig", "TieError", "decimate", "superimpose", "even", "decimate_rows"]

TWO_PI = 2.0 * np.pi


class TieError(ValueError):
    """Raised when a superposition hits exactly coincident values (caller resamples)."""


@dataclass(frozen=True)
class OrderedConfig:
    values: np.ndarray
    kind: str  # "line" or "circle"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if self.kind == "line":
            if v.size > 1 and not np.all(np.diff(v) < 0.0):
                raise ValueError("line configuration must be strictly decreasing")
        elif self.kind == "circle":
            if np.any(v <= 0.0) or np.any(v >= TWO_PI):
                raise ValueError("circle values must lie in (0, 2 pi)")
            if v.size > 1 and not np.all(np.diff(v) > 0.0):
                raise ValueError("circle configuration must be strictly increasing")
        else:
            raise ValueError(f"unknown kind {self.kind!r}")
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.size


def decimate(config: OrderedConfig, p: int) -> OrderedConfig:
    """Every p-th element (1-based positions p, 2p, 3p, ...) in canonical order."""
    if p < 1:
        raise ValueError("p must be a positive integer")
    return OrderedConfig(config.values[p - 1 :: p], config.kind)


def even(config: OrderedConfig) -> OrderedConfig:
    """Alias for decimate(config, 2)."""
    return decimate(config, 2)


def superimpose(c1: OrderedConfig, c2: OrderedConfig) -> OrderedConfig:
    """Merged, strictly sorted union of two configurations of the same kind."""
    if c1.kind != c2.kind:
        raise ValueError(f"kind mismatch: {c1.kind!r} vs {c2.kind!r}")
    merged = np.concatenate([c1.values, c2.values])
    merged = np.sort(merged)
    if np.any(np.diff(merged) == 0.0):
        raise TieError("superposition produced coincident values")
    if c1.kind == "line":
        merged = merged[::-1]
    return OrderedConfig(merged, c1.kind)


def decimate_rows(values: np.ndarray, p: int) -> np.ndarray:
    """Row-wise decimation of a batch whose rows are already in canonical order."""
    if p < 1:
        raise ValueError("p must be a positive integer")
    return values[:, p - 1 :: p]
