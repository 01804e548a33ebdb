"""Two-sided Fourier coefficient sequences and the built-in test families.

A sequence maps ``n`` in Z to the complex coefficient of ``e^{inx}``.  Cosine
families are given by their cosine coefficients ``a_n`` and converted with the
halving convention ``f(0) = a_0/2``, ``f(+-k) = a_k/2``, so that
``a_0/2 + sum a_k cos kx`` and ``sum f(k) e^{ikx}`` are the same series.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

import numpy as np

TWO_SIDED = "two_sided"
NONNEG_ONLY = "nonneg_only"

SYM_NONE = "none"
SYM_REAL_EVEN = "real_even"
SYM_CONJUGATE = "conjugate"

ArrayFn = Callable[[np.ndarray], np.ndarray]


class OutOfSupportError(IndexError):
    """Raised when a negative index is requested from a one-sided sequence."""


class UnknownFamilyError(KeyError):
    pass


@dataclass(frozen=True)
class Sector:
    """The closed sector ``{z : |arg z| <= theta}`` with ``0 <= theta < pi/2``."""

    theta: float

    def __post_init__(self):
        if not (0.0 <= self.theta < math.pi / 2):
            raise ValueError(f"sector angle must lie in [0, pi/2), got {self.theta}")


@dataclass(frozen=True)
class TailComponent:
    """One modulated piece ``g(k) e^{ik*shift}`` of a coefficient tail.

    ``plus`` and ``minus`` give ``g`` on the positive and negative side for
    ``k >= 1``; their moduli must be nonincreasing and tend to zero from index
    ``monotone_from`` on.  ``shift`` is 0 or pi.
    """

    shift: float
    plus: ArrayFn
    minus: ArrayFn
    monotone_from: int = 1


@dataclass(frozen=True)
class TailModel:
    components: tuple[TailComponent, ...] = ()
    # upper bound of sum_{|k| > N} |f(k)|^2, used when the variation is infinite
    l2_tail: Callable[[int], float] | None = None
    # index beyond which every coefficient vanishes (finite families)
    degree: int | None = None


@dataclass(frozen=True, eq=False)
class CoefficientSequence:
    """Closed-form evaluator ``n -> f(n)`` plus family metadata."""

    family_id: str
    params: Mapping[str, Any]
    support: str
    symmetry: str
    positive: ArrayFn = field(repr=False)
    negative: ArrayFn | None = field(default=None, repr=False)
    tail: TailModel | None = field(default=None, repr=False)
    # |f(k)| = O(|k|^-decay); math.inf for trigonometric polynomials
    decay: float = 0.0
    # every coefficient real and >= 0 (sector angle 0)
    real_nonneg: bool = False

    def __post_init__(self):
        if self.symmetry == SYM_CONJUGATE:
            f0 = complex(self.positive(np.zeros(1, dtype=np.int64))[0])
            if f0.imag != 0:
                raise ValueError("conjugate symmetry needs a real f(0)")
        elif self.symmetry == SYM_NONE and self.negative is None and self.support != NONNEG_ONLY:
            raise ValueError("symmetry 'none' on two-sided support needs a negative-side evaluator")

    def values(self, ks) -> np.ndarray:
        """Vectorized ``f(k)`` for an integer array ``ks``."""
        ks = np.asarray(ks, dtype=np.int64)
        neg = ks < 0
        if neg.any() and self.support == NONNEG_ONLY:
            raise OutOfSupportError(
                f"{self.family_id}: index {int(ks[neg].min())} outside nonneg support")
        out = np.empty(ks.shape, dtype=complex)
        if (~neg).any():
            out[~neg] = self.positive(ks[~neg])
        if neg.any():
            kk = -ks[neg]
            if self.symmetry == SYM_REAL_EVEN:
                out[neg] = self.positive(kk)
            elif self.symmetry == SYM_CONJUGATE:
                out[neg] = np.conj(self.positive(kk))
            else:
                out[neg] = self.negative(kk)
        return out

    def __call__(self, n: int) -> complex:
        return coeff(self, n)


def coeff(seq: CoefficientSequence, n: int) -> complex:
    return complex(seq.values(np.array([n]))[0])


def cosine_coefficient(seq: CoefficientSequence, n: int) -> float:
    """``a_n`` of a real even sequence (undoes the halving convention)."""
    if seq.symmetry != SYM_REAL_EVEN:
        raise ValueError("cosine coefficients exist only for real_even sequences")
    if n < 0:
        raise ValueError("cosine coefficients are indexed by n >= 0")
    return 2.0 * coeff(seq, n).real


def forward_difference(seq: CoefficientSequence, k: int, side: str = "plus") -> complex:
    """``f(k+1) - f(k)`` for side 'plus', ``f(-k-1) - f(-k)`` for side 'minus'."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if side == "plus":
        v = seq.values(np.array([k, k + 1]))
    elif side == "minus":
        v = seq.values(np.array([-k, -k - 1]))
    else:
        raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")
    return complex(v[1] - v[0])


def sector_margin(seq: CoefficientSequence, sector: Sector, n_max: int) -> dict:
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    v = seq.values(np.arange(n_max + 1))
    args = np.where(v == 0, 0.0, np.abs(np.angle(v)))
    worst = int(np.argmax(args))
    max_arg = float(args[worst])
    # np.angle of e^{i theta} r can exceed theta by an ulp
    ok = max_arg <= sector.theta + 4 * np.finfo(float).eps
    return {"max_arg": max_arg, "pass": bool(ok), "worst_n": worst}


def scaled(seq: CoefficientSequence, alpha: complex) -> CoefficientSequence:
    """``alpha * seq``; keeps real_even only for real alpha."""
    alpha = complex(alpha)
    sym = seq.symmetry
    if sym != SYM_NONE and alpha.imag != 0:
        sym = SYM_NONE
    pos, neg_src = seq.positive, seq

    def negative(k):
        return alpha * neg_src.values(-k)

    tail = seq.tail
    if tail is not None:
        a = abs(alpha)
        comps = tuple(
            TailComponent(c.shift, _mul(c.plus, a), _mul(c.minus, a), c.monotone_from)
            for c in tail.components)
        l2 = tail.l2_tail
        tail = TailModel(comps, (lambda N: a * a * l2(N)) if l2 else None, tail.degree)
    nonneg = seq.real_nonneg and alpha.imag == 0 and alpha.real >= 0
    return CoefficientSequence(seq.family_id, seq.params, seq.support, sym,
                               lambda k: alpha * pos(k), negative, tail, seq.decay, nonneg)


def _mul(fn: ArrayFn, a: float) -> ArrayFn:
    return lambda k: a * fn(k)


# --------------------------------------------------------------------------
# built-in families

_REGISTRY: dict[str, Callable[[dict], CoefficientSequence]] = {}


def register(name: str):
    def deco(fn):
        _REGISTRY[name] = fn
        return fn
    return deco


def family_names() -> list[str]:
    return sorted(_REGISTRY)


def make_family(descriptor: Mapping[str, Any] | str, **params) -> CoefficientSequence:
    """Build a sequence from ``{"family_id": ..., "params": {...}}``.

    An optional ``"support": "nonneg_only"`` entry restricts the result to
    ``n >= 0``.
    """
    if isinstance(descriptor, str):
        descriptor = {"family_id": descriptor, "params": params}
    fid = descriptor.get("family_id", descriptor.get("family"))
    if fid not in _REGISTRY:
        raise UnknownFamilyError(f"unknown family {fid!r}; known: {', '.join(family_names())}")
    seq = _REGISTRY[fid](dict(descriptor.get("params") or {}))
    if descriptor.get("support", TWO_SIDED) == NONNEG_ONLY:
        seq = dataclasses.replace(seq, support=NONNEG_ONLY)
    return seq


def _check_keys(fid: str, params: dict, allowed: Sequence[str]):
    extra = set(params) - set(allowed)
    if extra:
        raise ValueError(f"{fid}: unexpected parameters {sorted(extra)}")


def _cosine_family(fid: str, params: dict, a: ArrayFn, decay: float,
                   tail: TailModel | None) -> CoefficientSequence:
    def positive(k):
        return 0.5 * a(k).astype(complex)

    return CoefficientSequence(fid, params, TWO_SIDED, SYM_REAL_EVEN, positive,
                               tail=tail, decay=decay, real_nonneg=True)


def _monotone_tail(g: ArrayFn, start: int = 1) -> TailModel:
    return TailModel((TailComponent(0.0, g, g, start),))


def _inv_pow_a(alpha: float) -> ArrayFn:
    def a(k):
        kf = np.maximum(k, 1).astype(float)
        return kf ** (-alpha)
    return a


@register("inv_n")
def _inv_n(params):
    _check_keys("inv_n", params, ())
    a = _inv_pow_a(1.0)
    return _cosine_family("inv_n", params, a, 1.0, _monotone_tail(lambda k: 0.5 * a(k)))


@register("inv_pow")
def _inv_pow(params):
    _check_keys("inv_pow", params, ("alpha",))
    alpha = float(params.setdefault("alpha", 1.0))
    if not alpha > 0:
        raise ValueError(f"inv_pow: alpha must be > 0, got {alpha}")
    a = _inv_pow_a(alpha)
    return _cosine_family("inv_pow", params, a, alpha, _monotone_tail(lambda k: 0.5 * a(k)))


def _inv_log_a(k):
    return 1.0 / np.log(k.astype(float) + 2.0)


@register("inv_log")
def _inv_log(params):
    _check_keys("inv_log", params, ())
    return _cosine_family("inv_log", params, _inv_log_a, 0.0,
                          _monotone_tail(lambda k: 0.5 * _inv_log_a(k), 0))


@register("real_even_log")
def _real_even_log(params):
    _check_keys("real_even_log", params, ())
    return _cosine_family("real_even_log", params, _inv_log_a, 0.0,
                          _monotone_tail(lambda k: 0.5 * _inv_log_a(k), 0))


@register("inv_log_sq")
def _inv_log_sq(params):
    _check_keys("inv_log_sq", params, ())

    def a(k):
        return np.log(k.astype(float) + 2.0) ** -2
    return _cosine_family("inv_log_sq", params, a, 0.0, _monotone_tail(lambda k: 0.5 * a(k), 0))


@register("oscillating_mvbv")
def _oscillating(params):
    _check_keys("oscillating_mvbv", params, ())

    def a(k):
        kf = np.maximum(k, 1).astype(float)
        return (2.0 + np.where(k % 2 == 0, 1.0, -1.0)) / kf

    # a_k/2 = 1/k + (-1)^k/(2k): a monotone part and a part modulated by e^{ik pi}
    inv = _inv_pow_a(1.0)
    tail = TailModel((
        TailComponent(0.0, inv, inv),
        TailComponent(math.pi, lambda k: 0.5 * inv(k), lambda k: 0.5 * inv(k)),
    ))
    return _cosine_family("oscillating_mvbv", params, a, 1.0, tail)


def _lacunary_l2_tail(N: int) -> float:
    # f(+-2^j) = 1/(2j); sum_{j >= J} 1/j^2 <= 1/J + 1/J^2
    J = max(int(N).bit_length(), 1)
    if (1 << J) <= N:
        J += 1
    return 2 * 0.25 * (1.0 / J + 1.0 / J ** 2)


@register("lacunary_spike")
def _lacunary(params):
    _check_keys("lacunary_spike", params, ())

    def a(k):
        k = np.asarray(k, dtype=np.int64)
        spike = (k >= 2) & ((k & (k - 1)) == 0)
        j = np.frexp(np.maximum(k, 1).astype(float))[1] - 1
        return np.where(spike, 1.0 / np.maximum(j, 1), 0.0)

    return _cosine_family("lacunary_spike", params, a, 0.0,
                          TailModel(l2_tail=_lacunary_l2_tail))


@register("finite")
def _finite(params):
    """Array-backed family.

    ``coeffs=[a_0, a_1, ...]`` gives a real cosine polynomial; alternatively
    ``exp_coeffs=[...]`` with ``offset`` gives complex ``f(offset + i)``
    directly (no symmetry).
    """
    _check_keys("finite", params, ("coeffs", "exp_coeffs", "offset"))
    if "coeffs" in params:
        a_arr = np.asarray(params["coeffs"], dtype=float)
        if a_arr.ndim != 1 or a_arr.size == 0:
            raise ValueError("finite: coeffs must be a nonempty list")
        params["coeffs"] = [float(v) for v in a_arr]
        deg = a_arr.size - 1

        def a(k):
            out = np.zeros(k.shape)
            inside = k <= deg
            out[inside] = a_arr[k[inside]]
            return out
        seq = _cosine_family("finite", params, a, math.inf, TailModel(degree=deg))
        return dataclasses.replace(seq, real_nonneg=bool((a_arr >= 0).all()))
    if "exp_coeffs" not in params:
        raise ValueError("finite: needs 'coeffs' or 'exp_coeffs'")
    c = np.asarray([complex(*v) if isinstance(v, (list, tuple)) else complex(v)
                    for v in params["exp_coeffs"]])
    off = int(params.setdefault("offset", 0))
    if c.size == 0:
        raise ValueError("finite: exp_coeffs must be nonempty")

    def lookup(k):
        idx = k - off
        out = np.zeros(k.shape, dtype=complex)
        inside = (idx >= 0) & (idx < c.size)
        out[inside] = c[idx[inside]]
        return out

    deg = max(abs(off), abs(off + c.size - 1))
    nonneg = bool((c.imag == 0).all() and (c.real >= 0).all())
    return CoefficientSequence("finite", params, TWO_SIDED, SYM_NONE, lookup,
                               lambda k: lookup(-k), TailModel(degree=deg), math.inf, nonneg)


@register("complex_sector")
def _complex_sector(params):
    """``f(n) = e^{i phi} (n+1)^{-alpha}`` for n >= 0, conjugate for n < 0."""
    _check_keys("complex_sector", params, ("phi", "alpha"))
    phi = float(params.setdefault("phi", 0.5))
    alpha = float(params.setdefault("alpha", 1.0))
    if not abs(phi) < math.pi / 2:
        raise ValueError(f"complex_sector: |phi| must be < pi/2, got {phi}")
    if not alpha > 0:
        raise ValueError(f"complex_sector: alpha must be > 0, got {alpha}")
    rot = complex(math.cos(phi), math.sin(phi))

    def positive(k):
        return rot * (k.astype(float) + 1.0) ** (-alpha)

    def env(k):
        return (k.astype(float) + 1.0) ** (-alpha)
    # f(0) = e^{i phi} is not real, so the negative side is conj(f(k)) for k >= 1
    # without claiming conjugate symmetry at 0
    return CoefficientSequence("complex_sector", params, TWO_SIDED, SYM_NONE, positive,
                               lambda k: np.conj(positive(k)),
                               tail=_monotone_tail(env, 0), decay=alpha)


@register("analytic_inv_n")
def _analytic_inv_n(params):
    """``f(k) = 1/k`` for k >= 1, ``f(0) = 1``, zero on the negative side."""
    _check_keys("analytic_inv_n", params, ())
    inv = _inv_pow_a(1.0)

    def zero(k):
        return np.zeros(k.shape, dtype=complex)
    return CoefficientSequence(
        "analytic_inv_n", params, TWO_SIDED, SYM_NONE, lambda k: inv(k).astype(complex), zero,
        TailModel((TailComponent(0.0, inv, lambda k: np.zeros(k.shape)),)), 1.0, True)


@register("constant")
def _constant(params):
    """``f(n) = value`` for n >= 0 and its conjugate for n < 0."""
    _check_keys("constant", params, ("value_re", "value_im"))
    v = complex(float(params.setdefault("value_re", 1.0)),
                float(params.setdefault("value_im", 0.0)))
    sym = SYM_REAL_EVEN if v.imag == 0 else SYM_NONE
    return CoefficientSequence("constant", params, TWO_SIDED, sym,
                               lambda k: np.full(k.shape, v, dtype=complex),
                               lambda k: np.full(k.shape, v.conjugate(), dtype=complex),
                               real_nonneg=v.imag == 0 and v.real >= 0)


# one valid descriptor per family, used for sweeps over "every built-in family"
EXAMPLE_DESCRIPTORS: dict[str, dict] = {
    "inv_n": {"family_id": "inv_n", "params": {}},
    "inv_log": {"family_id": "inv_log", "params": {}},
    "real_even_log": {"family_id": "real_even_log", "params": {}},
    "inv_log_sq": {"family_id": "inv_log_sq", "params": {}},
    "inv_pow": {"family_id": "inv_pow", "params": {"alpha": 1.5}},
    "oscillating_mvbv": {"family_id": "oscillating_mvbv", "params": {}},
    "lacunary_spike": {"family_id": "lacunary_spike", "params": {}},
    "finite": {"family_id": "finite", "params": {"coeffs": [1.0, 0.5, 0.25, 0.0, 0.1]}},
    "complex_sector": {"family_id": "complex_sector", "params": {"phi": 0.6, "alpha": 1.0}},
    "analytic_inv_n": {"family_id": "analytic_inv_n", "params": {}},
    "constant": {"family_id": "constant", "params": {"value_re": 1.0}},
}
