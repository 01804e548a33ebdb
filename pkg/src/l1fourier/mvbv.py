"""Empirical diagnostics for the mean value bounded variation (MVBV) condition.

A sequence ``c`` is MVBV when, for some ``lambda >= 2`` and all ``m >= 1``,

    sum_{k=m}^{2m} |c_{k+1} - c_k|  <=  C(c) * (1/m) * sum_{k=[m/lambda]}^{[lambda m]} |c_k|.

A finite scan can only collect evidence for or against this; verdicts are
labelled accordingly.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .sequences import NONNEG_ONLY, CoefficientSequence, OutOfSupportError

BOUNDED = "bounded-evidence"
GROWTH = "growth-evidence"
INCONCLUSIVE = "inconclusive"

FLAG_INFINITE = "infinite-ratio"
FLAG_ZERO_OVER_ZERO = "zero-over-zero"


def _check_lambda(lam: float):
    if not lam >= 2:
        raise ValueError(f"lambda must be >= 2, got {lam}")


def window(m: int, lam: float) -> tuple[int, int]:
    """Inclusive index window ``[floor(m/lambda), floor(lambda m)]``."""
    return int(math.floor(m / lam)), int(math.floor(lam * m))


def _ratio_parts(seq: CoefficientSequence, m: int, lam: float) -> tuple[float, float]:
    if m < 1:
        raise ValueError("m must be >= 1")
    _check_lambda(lam)
    c = seq.values(np.arange(m, 2 * m + 2))
    num = float(np.sum(np.abs(np.diff(c))))
    lo, hi = window(m, lam)
    den = float(np.sum(np.abs(seq.values(np.arange(lo, hi + 1))))) / m
    return num, den


def _divide(num: float, den: float) -> tuple[float, str | None]:
    if den == 0:
        return (math.inf, FLAG_INFINITE) if num != 0 else (0.0, FLAG_ZERO_OVER_ZERO)
    return num / den, None


def mvbv_ratio(seq: CoefficientSequence, m: int, lam: float = 2.0) -> float:
    """Block variation over ``[m, 2m]`` divided by the windowed mean of ``|c_k|``."""
    return _divide(*_ratio_parts(seq, m, lam))[0]


@dataclass
class MvbvReport:
    lam: float
    m_values: list[int]
    ratios: list[float]
    sup_ratio: float
    trend_slope: float
    verdict: str
    flags: dict[int, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        d["flags"] = {str(m): f for m, f in self.flags.items()}
        return d

    def rows(self) -> list[dict]:
        return [{"m": m, "ratio": r} for m, r in zip(self.m_values, self.ratios)]


def loglog_slope(xs, ys) -> float:
    """Least-squares slope of log y against log x over positive finite points."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    ok = (x > 0) & (y > 0) & np.isfinite(y)
    if ok.sum() < 2:
        return 0.0
    return float(np.polyfit(np.log(x[ok]), np.log(y[ok]), 1)[0])


def mvbv_scan(seq: CoefficientSequence, m_grid, lam: float = 2.0,
              bounded_slope: float = 0.05, growth_slope: float = 0.5) -> MvbvReport:
    m_grid = [int(m) for m in m_grid]
    if not m_grid:
        raise ValueError("m_grid must be nonempty")
    if m_grid[0] < 1 or any(a >= b for a, b in zip(m_grid, m_grid[1:])):
        raise ValueError("m_grid must be strictly increasing and start at >= 1")
    ratios, flags = [], {}
    for m in m_grid:
        r, flag = _divide(*_ratio_parts(seq, m, lam))
        ratios.append(r)
        if flag:
            flags[m] = flag
    slope = loglog_slope(m_grid, ratios)
    has_inf = any(math.isinf(r) for r in ratios)
    if slope <= bounded_slope and not has_inf:
        verdict = BOUNDED
    elif slope >= growth_slope:
        verdict = GROWTH
    else:
        verdict = INCONCLUSIVE
    return MvbvReport(lam, m_grid, ratios, max(ratios), slope, verdict, flags)


def _require_two_sided(seq: CoefficientSequence):
    if seq.support == NONNEG_ONLY:
        raise OutOfSupportError(f"{seq.family_id}: needs a two-sided sequence")


def condition_two_sum(seq: CoefficientSequence, n: int, mu: float) -> float:
    """``sum_{k=n}^{[mu n]} |Df(k) - Df(-k)| log k``, the symmetry defect term."""
    _require_two_sided(seq)
    if n < 1:
        raise ValueError("n must be >= 1")
    top = int(math.floor(mu * n))
    if top < n:
        raise ValueError(f"[mu n] = {top} < n = {n}")
    k = np.arange(n, top + 2)
    d_plus = np.diff(seq.values(k))
    d_minus = np.diff(seq.values(-k))
    return float(np.sum(np.abs(d_plus - d_minus) * np.log(k[:-1])))


def condition_two_scan(seq: CoefficientSequence, mu_list, n_grid) -> dict:
    """Estimate ``limsup_n`` of the defect sum for each mu by the max over the
    upper half of ``n_grid``; report whether the estimates fall as mu decreases to 1."""
    mu_list = [float(m) for m in mu_list]
    n_grid = [int(n) for n in n_grid]
    if not mu_list or not n_grid:
        raise ValueError("mu_list and n_grid must be nonempty")
    if any(a <= b for a, b in zip(mu_list, mu_list[1:])):
        raise ValueError("mu_list must be strictly decreasing")
    upper = n_grid[len(n_grid) // 2:]
    table = []
    for mu in mu_list:
        est = max(condition_two_sum(seq, n, mu) for n in upper)
        table.append({"mu": mu, "limsup_estimate": est})
    est = [row["limsup_estimate"] for row in table]
    falling = all(b <= a for a, b in zip(est, est[1:]))
    evidence = falling and (est[-1] < est[0] or est[0] == 0.0)
    return {"table": table, "condition_two_evidence": bool(evidence)}


def lemma1_check(seq: CoefficientSequence, n: int, mu: float = 1.5, lam: float = 2.0) -> dict:
    """Compare ``sum_{k=n}^{[mu n]} |Dc_k| log k`` with ``max |c_k| log k`` over
    ``[n/lambda, lambda n]``."""
    if not 1 < mu < 2:
        raise ValueError("mu must lie in (1, 2)")
    _check_lambda(lam)
    lo, hi = window(n, lam)
    if lo < 1:
        raise ValueError(f"n = {n} too small: floor(n/lambda) must be >= 1")
    top = int(math.floor(mu * n))
    k = np.arange(n, top + 2)
    lhs = float(np.sum(np.abs(np.diff(seq.values(k))) * np.log(k[:-1])))
    kk = np.arange(lo, hi + 1)
    rhs = float(np.max(np.abs(seq.values(kk)) * np.log(kk)))
    ratio, flag = _divide(lhs, rhs)
    return {"n": n, "lhs": lhs, "rhs_scale": rhs, "ratio": ratio, "flag": flag}
