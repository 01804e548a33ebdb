"""L1 norms on [-pi, pi] for uniformly sampled or callable periodic functions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

UNIFORM = "uniform_trapezoid"
PANEL_GAUSS = "panel_gauss"


@dataclass(frozen=True)
class QuadSpec:
    mode: str = PANEL_GAUSS
    M: int = 4096
    nodes_per_panel: int = 16
    breakpoints: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.mode == UNIFORM:
            if self.M < 16 or self.M % 2:
                raise ValueError(f"uniform mode needs even M >= 16, got {self.M}")
        elif self.mode == PANEL_GAUSS:
            if self.nodes_per_panel < 4:
                raise ValueError("nodes_per_panel must be >= 4")
        else:
            raise ValueError(f"unknown quadrature mode {self.mode!r}")
        bp = tuple(float(b) for b in self.breakpoints)
        if any(not (-math.pi < b < math.pi) for b in bp):
            raise ValueError("breakpoints must lie strictly inside (-pi, pi)")
        if any(b >= c for b, c in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", bp)


def uniform_grid(M: int) -> np.ndarray:
    """Nodes ``x_j = -pi + 2 pi j / M``, j = 0..M-1."""
    return -math.pi + 2.0 * math.pi * np.arange(M) / M


def l1_norm_sampled(values) -> float:
    """Rectangle rule ``(2 pi / M) sum |v_j|`` (the periodic trapezoid rule)."""
    v = np.asarray(values)
    if v.ndim != 1 or v.size < 16:
        raise ValueError("need a 1-d vector of at least 16 uniform samples")
    return float(2.0 * math.pi / v.size * np.sum(np.abs(v)))


def l1_distance(values_a, values_b) -> float:
    a = np.asarray(values_a)
    b = np.asarray(values_b)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    return l1_norm_sampled(a - b)


@lru_cache(maxsize=32)
def _gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def panel_edges(breakpoints: Sequence[float]) -> np.ndarray:
    return np.concatenate(([-math.pi], np.asarray(breakpoints, dtype=float), [math.pi]))


def l1_norm_callable(fn: Callable[[np.ndarray], np.ndarray], spec: QuadSpec) -> float:
    """Integrate ``|fn|`` over [-pi, pi].

    Uniform mode samples ``fn`` on the periodic grid; panel mode applies a
    fixed Gauss-Legendre rule on every panel between consecutive breakpoints.
    ``fn`` must accept numpy arrays.
    """
    if spec.mode == UNIFORM:
        return l1_norm_sampled(fn(uniform_grid(spec.M)))
    t, w = _gauss_legendre(spec.nodes_per_panel)
    edges = panel_edges(spec.breakpoints)
    a, b = edges[:-1], edges[1:]
    half = 0.5 * (b - a)
    x = (0.5 * (a + b))[:, None] + half[:, None] * t[None, :]
    vals = np.abs(fn(x.ravel())).reshape(x.shape)
    # panels accumulate in ascending order
    panel_sums = half * (vals @ w)
    return float(math.fsum(panel_sums))
