"""Dirichlet kernel D_k, its modified conjugate D*_k and E_k = D_k + i D*_k.

D*_k depends on a breakpoint parameter ``n``: on ``|x| < 1/n`` it uses the
regular form ``(cos(x/2) - cos((2k+1)x/2)) / (2 sin(x/2))`` and elsewhere the
singular form ``-cos((2k+1)x/2) / (2 sin(x/2))``.  Both differ by
``cos(x/2) / (2 sin(x/2))``, independent of k, so the telescoping identity
``E_k - E_{k-1} = e^{ikx}`` holds for every k whatever ``n`` is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import PANEL_GAUSS, UNIFORM, QuadSpec, l1_norm_callable

# below this |x| D_k is summed as a cosine polynomial
SMALL_X = 1e-4


@dataclass(frozen=True)
class KernelParams:
    k: int
    n: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("kernel order k must be >= 0")
        if self.n < 1:
            raise ValueError("breakpoint parameter n must be >= 1")


def dirichlet(k: int, x):
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    small = np.abs(x) < SMALL_X
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.sin((2 * k + 1) * x / 2) / (2 * np.sin(x / 2))
    if small.any():
        xs = x[small]
        j = np.arange(1, k + 1)
        out[small] = 0.5 + np.cos(np.multiply.outer(xs, j)).sum(axis=-1)
    return float(out[0]) if scalar else out


def conjugate_star(k: int, n: int, x):
    x = np.asarray(x, dtype=float)
    inner = np.abs(x) < 1.0 / n
    s = np.sin(x / 2)
    with np.errstate(invalid="ignore", divide="ignore"):
        # cos(x/2) - cos((2k+1)x/2) = 2 sin((k+1)x/2) sin(kx/2), free of cancellation
        regular = np.sin((k + 1) * x / 2) * np.sin(k * x / 2) / s
        singular = -np.cos((2 * k + 1) * x / 2) / (2 * s)
    out = np.where(inner, regular, singular)
    out = np.where(x == 0, 0.0, out)
    return out if out.ndim else float(out)


def complex_kernel(k: int, n: int, x):
    return dirichlet(k, x) + 1j * conjugate_star(k, n, x)


def identity_residuals(n: int, k_range, grid) -> dict:
    """Max deviations of ``E_k(+-x) - E_{k-1}(+-x) = e^{+-ikx}`` and
    ``E_k(x) + E_k(-x) = 2 D_k(x)`` over ``k_range`` and ``grid``."""
    x = np.asarray(grid, dtype=float)
    if np.any(np.abs(x) < 1e-6):
        raise ValueError("grid must avoid |x| < 1e-6")
    ks = list(k_range)
    if not ks:
        raise ValueError("empty k_range")
    res3 = res4 = 0.0
    prev = {1: complex_kernel(ks[0] - 1, n, x), -1: complex_kernel(ks[0] - 1, n, -x)}
    for k in ks:
        cur = {1: complex_kernel(k, n, x), -1: complex_kernel(k, n, -x)}
        for sgn in (1, -1):
            r = np.abs(cur[sgn] - prev[sgn] - np.exp(sgn * 1j * k * x)).max()
            res3 = max(res3, float(r))
        res4 = max(res4, float(np.abs(cur[1] + cur[-1] - 2 * dirichlet(k, x)).max()))
        prev = cur
    return {"max_res_3": res3, "max_res_4": res4}


def dirichlet_zeros(k: int) -> np.ndarray:
    """Zeros of D_k inside (-pi, pi): ``2 pi j / (2k+1)``, 0 < |j| <= k."""
    j = np.arange(1, k + 1)
    z = 2 * math.pi * j / (2 * k + 1)
    z = z[z < math.pi]
    return np.concatenate((-z[::-1], z))


def _e_breakpoints(k: int, n: int) -> np.ndarray:
    # |E_k| jumps at +-1/n; outside it equals 1/(2|sin(x/2)|), so grade panels
    # geometrically toward the jump, and resolve the oscillation of order k inside
    b = 1.0 / n
    inner_count = max(2, int(math.ceil(2 * b * (k + 1) / math.pi)) * 2)
    inner = np.linspace(-b, b, inner_count + 1)
    outer = []
    t = b
    while t * 1.5 < math.pi:
        t *= 1.5
        outer.append(t)
    outer = np.asarray(outer)
    pts = np.concatenate((-outer[::-1], inner, outer))
    return np.unique(pts[(pts > -math.pi) & (pts < math.pi)])


def kernel_quad_spec(kind: str, k: int, n: int, nodes_per_panel: int = 16) -> QuadSpec:
    """Panel-Gauss spec with all kinks of |D_k| or the jumps of |E_k| as breakpoints."""
    if kind == "D":
        bp = dirichlet_zeros(k) if k > 0 else np.array([])
        return QuadSpec(PANEL_GAUSS, nodes_per_panel=nodes_per_panel, breakpoints=tuple(bp))
    if kind == "E":
        return QuadSpec(PANEL_GAUSS, nodes_per_panel=nodes_per_panel,
                        breakpoints=tuple(_e_breakpoints(k, n)))
    raise ValueError(f"kind must be 'D' or 'E', got {kind!r}")


def kernel_l1(kind: str, k: int, n: int | None = None, quad: QuadSpec | None = None) -> float:
    """``||D_k||_L`` or ``||E_k||_L`` (breakpoint parameter ``n``, default k)."""
    n = max(k, 1) if n is None else n
    KernelParams(k, n)
    if quad is None:
        quad = kernel_quad_spec(kind, k, n)
    if kind == "D":
        fn = lambda x: dirichlet(k, x)  # noqa: E731
    elif kind == "E":
        if quad.mode == PANEL_GAUSS and not {-1.0 / n, 1.0 / n} <= set(quad.breakpoints):
            raise ValueError("panel quadrature of E_k needs breakpoints at +-1/n")
        fn = lambda x: complex_kernel(k, n, x)  # noqa: E731
    else:
        raise ValueError(f"kind must be 'D' or 'E', got {kind!r}")
    return l1_norm_callable(fn, quad)


def lower_bound_check(k_grid) -> dict:
    """Check ``||D_k||_L >= log(k)/pi`` and tabulate ``||D_k||_L / log k``."""
    rows = []
    ok = True
    for k in k_grid:
        if k < 2:
            raise ValueError("lower bound check needs k >= 2")
        norm = kernel_l1("D", k)
        bound = math.log(k) / math.pi
        ok &= norm >= bound
        rows.append({"k": int(k), "norm_D": norm, "bound": bound,
                     "ratio_to_log": norm / math.log(k)})
    return {"rows": rows, "pass": bool(ok)}


def kernel_table(k_grid, n_of_k=None) -> list[dict]:
    """Rows ``k, norm_D, norm_E, log_k, ratio_to_log`` with ratio (|D|+|E|)/log k."""
    rows = []
    for k in k_grid:
        n = n_of_k(k) if n_of_k else k
        nd = kernel_l1("D", k)
        ne = kernel_l1("E", k, n)
        lk = math.log(k)
        rows.append({"k": int(k), "norm_D": nd, "norm_E": ne, "log_k": lk,
                     "ratio_to_log": (nd + ne) / lk if lk > 0 else math.inf})
    return rows


__all__ = ["KernelParams", "dirichlet", "conjugate_star", "complex_kernel",
           "identity_residuals", "kernel_l1", "kernel_quad_spec", "lower_bound_check",
           "kernel_table", "dirichlet_zeros", "UNIFORM"]
