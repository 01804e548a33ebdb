"""Partial sums, de la Vallee Poussin means and reference samples.

The "true" function behind a coefficient family is represented by a long
partial sum ``S_{N_ref}`` sampled on a uniform grid, together with an upper
bound for ``||f - S_{N_ref}||_L`` derived from summation by parts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .sequences import NONNEG_ONLY, CoefficientSequence, OutOfSupportError

CERTIFIED = "certified"
ESTIMATE_ONLY = "estimate-only"

DEFAULT_K_CAP = 2 ** 20


class DegenerateWindowError(ValueError):
    """``[mu n] == n``: the Vallee Poussin window is empty."""


@dataclass(frozen=True)
class SynthesisPlan:
    n: int
    mu: float
    N_ref: int
    M: int

    def __post_init__(self):
        if self.N_ref <= math.floor(self.mu * self.n):
            raise ValueError("N_ref must exceed [mu n]")
        if self.M < 8 * self.N_ref or self.M % 2:
            raise ValueError("M must be even and >= 8 N_ref")


@dataclass(frozen=True)
class PlanPolicy:
    """How reference truncation and grid size scale with the target order."""

    ref_ratio: int = 16
    m_ratio: int = 8
    mu: float = 1.5
    k_cap: int = DEFAULT_K_CAP

    def plan(self, n: int) -> SynthesisPlan:
        N_ref = max(self.ref_ratio * max(n, 1), int(math.floor(self.mu * n)) + 1)
        M = self.m_ratio * N_ref
        M += M % 2
        return SynthesisPlan(n, self.mu, N_ref, M)


def vp_top(n: int, mu: float) -> int:
    """``[mu n]``; raises for an empty Vallee Poussin window."""
    top = int(math.floor(mu * n))
    if top <= n:
        raise DegenerateWindowError(f"degenerate V.P. window: [mu n] = {top} <= n = {n}")
    return top


def symmetric_indices(n: int) -> np.ndarray:
    """``0, -1, 1, -2, 2, ..., -n, n``: ascending |k|, negative first."""
    ks = np.empty(2 * n + 1, dtype=np.int64)
    ks[0] = 0
    ks[1::2] = -np.arange(1, n + 1)
    ks[2::2] = np.arange(1, n + 1)
    return ks


def _evaluate(ks: np.ndarray, c: np.ndarray, x, chunk: int = 256):
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty(x.shape, dtype=complex)
    for i in range(0, x.size, chunk):
        xs = x[i:i + chunk]
        out[i:i + chunk] = np.exp(1j * np.multiply.outer(xs, ks)) @ c
    return complex(out[0]) if scalar else out


def partial_sum(seq: CoefficientSequence, n: int, x):
    """``S_n(f, x) = sum_{|k| <= n} f(k) e^{ikx}`` evaluated pointwise."""
    if n < 0:
        raise ValueError("n must be >= 0")
    ks = symmetric_indices(n)
    return _evaluate(ks, seq.values(ks), x)


def _vp_weights(ks: np.ndarray, n: int, top: int) -> np.ndarray:
    a = np.abs(ks)
    w = np.clip((top - a) / (top - n), 0.0, 1.0)
    return np.where(a <= n, 1.0, w)


def vallee_poussin(seq: CoefficientSequence, n: int, mu: float, x):
    """Mean of ``S_k`` over ``k = n .. [mu n] - 1``."""
    top = vp_top(n, mu)
    ks = symmetric_indices(top)
    return _evaluate(ks, seq.values(ks) * _vp_weights(ks, n, top), x)


def sample_coefficients(ks: np.ndarray, c: np.ndarray, M: int) -> np.ndarray:
    """Values of ``sum c_k e^{ikx}`` at ``x_j = -pi + 2 pi j / M`` via one FFT."""
    if M < 2 * int(np.max(np.abs(ks))) + 2:
        raise ValueError(f"M = {M} too small for frequencies up to {int(np.max(np.abs(ks)))}")
    spec = np.zeros(M, dtype=complex)
    # e^{ik(-pi)} = (-1)^k moves the grid origin to -pi
    np.add.at(spec, ks % M, c * np.where(ks % 2 == 0, 1.0, -1.0))
    return np.fft.ifft(spec) * M


def sample_partial_sum(seq: CoefficientSequence, n: int, M: int) -> np.ndarray:
    if n < 0:
        raise ValueError("n must be >= 0")
    ks = symmetric_indices(n)
    return sample_coefficients(ks, seq.values(ks), M)


def sample_vallee_poussin(seq: CoefficientSequence, n: int, mu: float, M: int) -> np.ndarray:
    top = vp_top(n, mu)
    ks = symmetric_indices(top)
    return sample_coefficients(ks, seq.values(ks) * _vp_weights(ks, n, top), M)


def sample_derivative(seq: CoefficientSequence, r: int, N: int, M: int) -> np.ndarray:
    """Samples of the r-th derivative of ``S_N``: coefficients ``(ik)^r f(k)``."""
    ks = symmetric_indices(N)
    return sample_coefficients(ks, (1j * ks) ** r * seq.values(ks), M)


def abel_terms(seq: CoefficientSequence, n: int, mu: float, x) -> np.ndarray:
    """Summation-by-parts form of ``tau_{mu n, n} - S_n`` built from D_k and E_k.

    With ``N = [mu n]``, ``L = N - n`` and ``Df(k) = f(k+1) - f(k)``,
    ``Df(-k) = f(-k-1) - f(-k)``::

        tau - S_n = -(1/L) sum_{k=n}^{N} (N-k) (2 Df(k) D_k(x) - (Df(k) - Df(-k)) E_k(-x))
                    + (1/L) sum_{k=n}^{N-1} (f(k+1) E_k(x) + f(-k-1) E_k(-x))
                    - (f(n) E_n(x) + f(-n) E_n(-x))

    where every E_k uses breakpoint parameter n.
    """
    if seq.support == NONNEG_ONLY:
        raise OutOfSupportError(f"{seq.family_id}: needs a two-sided sequence")
    top = vp_top(n, mu)
    L = top - n
    x = np.asarray(x, dtype=float)
    kk = np.arange(n, top + 2)
    fp = seq.values(kk)
    fm = seq.values(-kk)
    dp = np.diff(fp)
    dm = np.diff(fm)
    first = np.zeros(x.shape, dtype=complex)
    second = np.zeros(x.shape, dtype=complex)
    for i, k in enumerate(range(n, top + 1)):
        e_plus = kernels.complex_kernel(k, n, x)
        e_minus = kernels.complex_kernel(k, n, -x)
        d_k = kernels.dirichlet(k, x)
        first += (top - k) * (2 * dp[i] * d_k - (dp[i] - dm[i]) * e_minus)
        if k < top:
            second += fp[i + 1] * e_plus + fm[i + 1] * e_minus
    boundary = fp[0] * kernels.complex_kernel(n, n, x) + fm[0] * kernels.complex_kernel(n, n, -x)
    return -first / L + second / L - boundary


def abel_decomposition_residual(seq: CoefficientSequence, n: int, mu: float, grid) -> float:
    """``max |abel_terms - (tau_{mu n, n} - S_n)|`` over ``grid``."""
    x = np.asarray(grid, dtype=float)
    if np.any(np.abs(x) < 1e-6):
        raise ValueError("grid must avoid |x| < 1e-6")
    direct = vallee_poussin(seq, n, mu, x) - partial_sum(seq, n, x)
    return float(np.max(np.abs(abel_terms(seq, n, mu, x) - direct)))


def _far_kernel_integral(delta: float) -> float:
    # int_{delta <= |y| <= pi} dy / (2 sin(|y|/2)) = -2 log tan(delta/4)
    return -2.0 * math.log(math.tan(delta / 4.0))


def tail_bound(seq: CoefficientSequence, N: int, k_cap: int = DEFAULT_K_CAP) -> float | None:
    """Upper estimate of ``||f - S_N||_L`` from the family's tail metadata.

    For a tail piece ``sum_{k>N} g_k e^{ik(x+s)}`` with ``|g|`` eventually
    monotone, summation by parts against ``E_k`` gives the pointwise bound
    ``V / (2 |sin((x+s)/2)|)`` with ``V = |g_{N+1}| + sum_{k>N} |g_{k+1} - g_k|``.
    That is integrated away from the singular point (distance >= 1/k_cap);
    inside, the coefficients up to ``k_cap`` are bounded absolutely.  The part
    of the spectrum above ``k_cap`` near the singular point is not covered.
    Square-summable families fall back on Cauchy-Schwarz.  Returns None when
    the family carries no tail metadata.
    """
    tail = seq.tail
    if tail is None:
        return None
    if tail.degree is not None:
        if N >= tail.degree:
            return 0.0
        ks = np.concatenate((np.arange(N + 1, tail.degree + 1), -np.arange(N + 1, tail.degree + 1)))
        return float(2 * math.pi * np.sum(np.abs(seq.values(ks))))
    bounds = []
    if tail.components:
        cap = max(k_cap, N + 2)
        delta = 1.0 / cap
        far = _far_kernel_integral(delta)
        ks = np.arange(N + 1, cap + 2)
        total = 0.0
        for comp in tail.components:
            for g in (comp.plus, comp.minus):
                gv = np.abs(np.asarray(g(ks), dtype=complex))
                if not gv.any():
                    continue
                var = abs(gv[0]) + float(np.sum(np.abs(np.diff(gv)))) + abs(gv[-1])
                total += var * far + 2 * delta * float(np.sum(gv[:-1]))
        bounds.append(total)
    if tail.l2_tail is not None:
        bounds.append(2 * math.pi * math.sqrt(tail.l2_tail(N)))
    return min(bounds) if bounds else None


@dataclass
class ReferenceValues:
    values: np.ndarray
    N_ref: int
    M: int
    tail_bound_integral: float | None

    @property
    def quality(self) -> str:
        return CERTIFIED if self.tail_bound_integral is not None else ESTIMATE_ONLY


def reference_values(seq: CoefficientSequence, plan: SynthesisPlan,
                     k_cap: int = DEFAULT_K_CAP) -> ReferenceValues:
    vals = sample_partial_sum(seq, plan.N_ref, plan.M)
    return ReferenceValues(vals, plan.N_ref, plan.M, tail_bound(seq, plan.N_ref, k_cap))
