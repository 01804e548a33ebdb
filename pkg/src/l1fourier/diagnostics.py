"""Experiment runners linking coefficient behaviour to L1 convergence.

Limits are rendered as trends over (usually dyadic) grids of orders ``n``.
Errors ``||f - S_n||_L`` are measured against a reference partial sum
``S_{N_ref}`` (see :mod:`l1fourier.synthesis`) and reported together with
the reference tail bound.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import synthesis as syn
from .mvbv import condition_two_sum, loglog_slope
from .quadrature import l1_distance, l1_norm_sampled
from .sequences import NONNEG_ONLY, CoefficientSequence

# sup_n |sum_{k<=n} sin(kx)/k| <= 3 sqrt(pi) gives
# |sum_{k=1}^n f(n+k)/k| <= (3/sqrt(pi)) ||f - S_n||_L
LEMMA2_CONSTANT = 3.0 / math.sqrt(math.pi)


class CoarseShiftWarning(UserWarning):
    """The requested shift is below one grid step."""


def _coeff_log(seq: CoefficientSequence, n: int) -> float:
    if n < 1:
        return 0.0
    ks = [n] if seq.support == NONNEG_ONLY else [n, -n]
    return float(np.max(np.abs(seq.values(np.array(ks))))) * math.log(n)


def _trend(first: float, last: float, vanish_ratio: float) -> str:
    if last == 0.0 or (first > 0 and last <= vanish_ratio * first):
        return "vanish"
    return "persist"


@dataclass
class ConvergenceTrace:
    family_id: str
    n_grid: list[int]
    err: list[float]
    err_bound: list[float]
    coeff_log: list[float]
    cond2: list[float]
    flags: list[str]
    verdict: str = ""

    def rows(self) -> list[dict]:
        return [{"n": n, "err": e, "err_bound": b, "coeff_log": c, "cond2": d, "flag": f}
                for n, e, b, c, d, f in zip(self.n_grid, self.err, self.err_bound,
                                            self.coeff_log, self.cond2, self.flags)]

    def to_dict(self) -> dict:
        return asdict(self)


def convergence_trace(seq: CoefficientSequence, n_grid, policy: syn.PlanPolicy | None = None,
                      vanish_ratio: float = 0.5) -> ConvergenceTrace:
    """Tabulate ``||f - S_n||_L`` next to ``max |f(+-n)| log n`` over ``n_grid``.

    The verdict compares ``last/first`` of both columns: a column whose ratio
    is at most ``vanish_ratio`` counts as vanishing.
    """
    policy = policy or syn.PlanPolicy()
    n_grid = [int(n) for n in n_grid]
    if not n_grid:
        raise ValueError("n_grid must be nonempty")
    if any(a >= b for a, b in zip(n_grid, n_grid[1:])) or n_grid[0] < 1:
        raise ValueError("n_grid must be strictly increasing positive integers")
    tr = ConvergenceTrace(seq.family_id, n_grid, [], [], [], [], [])
    for n in n_grid:
        plan = policy.plan(n)
        ref = syn.reference_values(seq, plan, policy.k_cap)
        err = l1_distance(ref.values, syn.sample_partial_sum(seq, n, plan.M))
        tb = ref.tail_bound_integral
        tr.err.append(err)
        tr.err_bound.append(err + tb if tb is not None else err)
        tr.coeff_log.append(_coeff_log(seq, n))
        mu_top = int(math.floor(policy.mu * n))
        if seq.support == NONNEG_ONLY or mu_top < n:
            tr.cond2.append(math.nan)
        else:
            tr.cond2.append(condition_two_sum(seq, n, policy.mu))
        tr.flags.append(ref.quality)
    e = _trend(tr.err[0], tr.err[-1], vanish_ratio)
    c = _trend(tr.coeff_log[0], tr.coeff_log[-1], vanish_ratio)
    tr.verdict = f"both {e}" if e == c else f"mixed (err {e}, coeff_log {c})"
    return tr


def lemma2_check(seq: CoefficientSequence, n: int, policy: syn.PlanPolicy | None = None) -> dict:
    """Check ``sum_{k=1}^n |f(n+k)|/k <= C ||f - S_n||_L`` with ``C = 3/sqrt(pi)``.

    ``||f - S_n||_L`` is replaced by ``err + tail bound``.  Complex data lying in
    a sector of half-angle theta use ``C sec(theta)``.
    """
    policy = policy or syn.PlanPolicy()
    if n < 1:
        raise ValueError("n must be >= 1")
    c = seq.values(np.arange(n + 1, 2 * n + 1))
    lhs = float(np.sum(np.abs(c) / np.arange(1, n + 1)))
    flags = []
    if seq.real_nonneg:
        const = LEMMA2_CONSTANT
    else:
        nz = c[c != 0]
        theta = float(np.max(np.abs(np.angle(nz)))) if nz.size else 0.0
        if theta >= math.pi / 2:
            raise ValueError("coefficients f(n+1..2n) are not confined to a sector |arg z| < pi/2")
        const = LEMMA2_CONSTANT / math.cos(theta)
        flags.append("sector-corrected")
    plan = policy.plan(n)
    ref = syn.reference_values(seq, plan, policy.k_cap)
    err = l1_distance(ref.values, syn.sample_partial_sum(seq, n, plan.M))
    tb = ref.tail_bound_integral
    if tb is None:
        flags.append(syn.ESTIMATE_ONLY)
        tb = 0.0
    rhs = const * (err + tb)
    return {"n": n, "lhs": lhs, "rhs": rhs, "ratio": lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else math.inf),
            "constant": const, "err": err, "tail_bound": tb, "pass": lhs <= rhs, "flags": flags}


def necessity_terms(seq: CoefficientSequence, n: int, lam: float = 2.0) -> dict:
    """Both sides of ``|f(2n)| log n <= C (I1 + I2)`` with every sum taken literally.

    ``I1 = (1/n) sum_{j=[lam]+1}^{J} (1/j) sum_{k=[(n+j)/lam]}^{[lam (n+j)]} |f(k)|``,
    ``I2 = sum_{j=1}^{J} |f(n+j)| / j`` and ``J = [n / (lam+1)^2]``.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    lhs = abs(complex(seq.values(np.array([2 * n]))[0])) * math.log(n)
    J = int(math.floor(n / (lam + 1) ** 2))
    j0 = int(math.floor(lam)) + 1
    i1 = 0.0
    if J >= j0:
        hi_all = int(math.floor(lam * (n + J)))
        absf = np.abs(seq.values(np.arange(0, hi_all + 1)))
        csum = np.concatenate(([0.0], np.cumsum(absf)))
        for j in range(j0, J + 1):
            lo = int(math.floor((n + j) / lam))
            hi = int(math.floor(lam * (n + j)))
            i1 += (csum[hi + 1] - csum[lo]) / j
        i1 /= n
    i2 = 0.0
    if J >= 1:
        i2 = float(np.sum(np.abs(seq.values(np.arange(n + 1, n + J + 1))) / np.arange(1, J + 1)))
    den = i1 + i2
    if den > 0:
        c = lhs / den
    else:
        c = 0.0 if lhs == 0 else math.inf
    return {"n": n, "lhs": lhs, "i1": i1, "i2": i2, "C": c}


def necessity_check(seq: CoefficientSequence, n_grid, lam: float = 2.0,
                    growth_slope: float = 0.05) -> dict:
    """Empirical constant of the coefficient-side estimate across ``n_grid``.

    Reports ``max/min`` of C over the upper half of the grid and whether C is
    non-growing (log-log slope at most ``growth_slope``).
    """
    rows = [necessity_terms(seq, int(n), lam) for n in n_grid]
    cs = [r["C"] for r in rows]
    upper = [c for c in cs[len(cs) // 2:] if c > 0 and math.isfinite(c)]
    spread = max(upper) / min(upper) if upper else 1.0
    finite = all(math.isfinite(c) for c in cs)
    slope = loglog_slope([r["n"] for r in rows], cs)
    return {"rows": rows, "upper_spread": spread, "slope": slope,
            "non_growing": bool(finite and slope <= growth_slope)}


def best_approx_proxy(seq: CoefficientSequence, n: int, mu: float | None = None,
                      policy: syn.PlanPolicy | None = None) -> float:
    """``||f - tau_{mu n, n}(f)||_L``, an upper proxy (up to a factor depending
    on mu) for the best L1 approximation by degree-n trigonometric polynomials."""
    policy = policy or syn.PlanPolicy()
    mu = policy.mu if mu is None else mu
    syn.vp_top(n, mu)
    plan = policy.plan(max(n, 1))
    if plan.N_ref <= math.floor(mu * n):
        raise ValueError("reference truncation must exceed [mu n]")
    ref = syn.sample_partial_sum(seq, plan.N_ref, plan.M)
    return l1_distance(ref, syn.sample_vallee_poussin(seq, n, mu, plan.M))


def modulus_of_continuity(values, t: float, max_shifts: int | None = None) -> float:
    """``max_{0 <= h <= t} ||f(. + h) - f||_L`` over shifts by whole grid steps.

    ``values`` are uniform samples on ``x_j = -pi + 2 pi j / M``.  With
    ``max_shifts`` only that many evenly spaced shifts (always including the
    largest) are examined.
    """
    v = np.asarray(values)
    M = v.size
    if not 0 <= t <= math.pi:
        raise ValueError("t must lie in [0, pi]")
    if t == 0:
        return 0.0
    step = 2 * math.pi / M
    s_max = int(math.floor(t / step + 1e-9))
    if s_max < 1:
        warnings.warn(f"t = {t} is below the grid step {step}; using one step",
                      CoarseShiftWarning, stacklevel=2)
        s_max = 1
    shifts = np.arange(1, s_max + 1)
    if max_shifts is not None and shifts.size > max_shifts:
        shifts = np.unique(np.linspace(1, s_max, max_shifts).round().astype(int))
    return max(l1_norm_sampled(np.roll(v, -int(s)) - v) for s in shifts)


@dataclass(frozen=True)
class Psi:
    """A positive decreasing rate sequence ``n -> psi_n``."""

    id: str
    fn: Callable[[int], float] = field(repr=False)

    def __call__(self, n: int) -> float:
        return float(self.fn(int(n)))


def psi_power(p: float) -> Psi:
    return Psi(f"(n+1)^-{p:g}", lambda n: (n + 1.0) ** (-p))


def psi_inverse(p: float = 1.0) -> Psi:
    return Psi(f"n^-{p:g}", lambda n: float(n) ** (-p))


def psi_geometric(base: float = 2.0) -> Psi:
    return Psi(f"{base:g}^-n", lambda n: base ** (-float(n)))


def doubling_check(psi: Psi, n_grid, c1_floor: float = 1e-3) -> dict:
    """``psi_{2n} / psi_n`` must stay in ``[c1, 1]``; c1 is taken as ``c1_floor``."""
    ratios = []
    for n in n_grid:
        a = psi(n)
        ratios.append(psi(2 * n) / a if a > 0 else 0.0)
    ok = all(c1_floor <= r <= 1.0 + 1e-12 for r in ratios)
    return {"ratios": ratios, "min_ratio": min(ratios), "max_ratio": max(ratios), "ok": ok}


@dataclass
class RateReport:
    psi_id: str
    n_grid: list[int]
    psi: list[float]
    err: list[float]
    best: list[float]
    coeff_log: list[float]
    ratio_err: list[float]
    ratio_coeff: list[float]
    ratio_best: list[float]
    doubling_ok: bool
    bounded: dict[str, bool]
    consistent: bool

    def rows(self) -> list[dict]:
        return [{"n": n, "psi": p, "ratio_err": a, "ratio_best": b, "ratio_coeff": c}
                for n, p, a, b, c in zip(self.n_grid, self.psi, self.ratio_err,
                                         self.ratio_best, self.ratio_coeff)]

    def to_dict(self) -> dict:
        return asdict(self)


def rate_check(seq: CoefficientSequence, psi: Psi, n_grid, mu: float | None = None,
               policy: syn.PlanPolicy | None = None, bounded_slope: float = 0.05,
               c1_floor: float = 1e-3) -> RateReport:
    """Compare ``||f - S_n||``, the Vallee Poussin proxy and ``|f(n)| log n`` with psi.

    A ratio column counts as bounded when its log-log slope over ``n_grid`` is
    at most ``bounded_slope``.  ``consistent`` is the testable equivalence:
    the error column is bounded exactly when both other columns are.
    """
    policy = policy or syn.PlanPolicy()
    mu = policy.mu if mu is None else mu
    n_grid = [int(n) for n in n_grid]
    if not n_grid:
        raise ValueError("n_grid must be nonempty")
    ps = [psi(n) for n in n_grid]
    if any(p <= 0 for p in ps) or any(b > a for a, b in zip(ps, ps[1:])):
        raise ValueError(f"psi {psi.id} must be positive and nonincreasing on n_grid")
    dbl = doubling_check(psi, n_grid, c1_floor)
    err, best, cl = [], [], []
    for n in n_grid:
        plan = policy.plan(n)
        ref = syn.sample_partial_sum(seq, plan.N_ref, plan.M)
        err.append(l1_distance(ref, syn.sample_partial_sum(seq, n, plan.M)))
        best.append(l1_distance(ref, syn.sample_vallee_poussin(seq, n, mu, plan.M)))
        cl.append(_coeff_log(seq, n))
    r_err = [e / p for e, p in zip(err, ps)]
    r_best = [b / p for b, p in zip(best, ps)]
    r_coeff = [c / p for c, p in zip(cl, ps)]
    bounded = {name: loglog_slope(n_grid, col) <= bounded_slope
               for name, col in (("err", r_err), ("best", r_best), ("coeff", r_coeff))}
    consistent = bounded["err"] == (bounded["best"] and bounded["coeff"])
    return RateReport(psi.id, n_grid, ps, err, best, cl, r_err, r_coeff, r_best,
                      dbl["ok"], bounded, consistent)


def derivative_summable(seq: CoefficientSequence, r: int) -> bool:
    """``sum |k|^r |f(k)| < inf`` judged from the family's decay exponent."""
    return seq.decay - r > 1


def smoothness_psi(seq: CoefficientSequence, r: int, policy: syn.PlanPolicy | None = None) -> Psi:
    """``psi_n = (n+1)^-r omega(f^(r), 1/(n+1))`` with f^(r) synthesized per n."""
    policy = policy or syn.PlanPolicy()

    def fn(n: int) -> float:
        plan = policy.plan(max(n, 1))
        d = syn.sample_derivative(seq, r, plan.N_ref, plan.M)
        return (n + 1.0) ** (-r) * modulus_of_continuity(d, 1.0 / (n + 1))

    return Psi(f"smoothness(r={r})", fn)


def corollary3_check(seq: CoefficientSequence, r: int, n_grid,
                     policy: syn.PlanPolicy | None = None) -> dict:
    """Rate check against the Jackson-type rate built from ``omega(f^(r), .)``."""
    if r < 1:
        raise ValueError("r must be a positive integer")
    if not derivative_summable(seq, r):
        raise ValueError(f"{seq.family_id}: the series of f^({r}) is not absolutely "
                         "summable, so f^(r) is not known to be integrable")
    psi = smoothness_psi(seq, r, policy)
    rep = rate_check(seq, psi, n_grid, policy=policy)
    return {"r": r, "report": rep, "consistent": rep.consistent}
