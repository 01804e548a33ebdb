import math
import warnings

import numpy as np
import pytest

from l1fourier import diagnostics as diag
from l1fourier import synthesis as syn
from l1fourier.quadrature import uniform_grid
from l1fourier.sequences import make_family

GL_T, GL_W = np.polynomial.legendre.leggauss(24)


def _integrate_abs(fn, edges):
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        x = 0.5 * (a + b) + 0.5 * (b - a) * GL_T
        total += 0.5 * (b - a) * float(np.abs(fn(x)) @ GL_W)
    return total


def inv_n_remainder_norm(n):
    """||f - S_n||_L for a_k = 1/k, using f(x) = 1/2 - log|2 sin(x/2)|."""
    def rem(x):
        k = np.arange(1, n + 1)
        return -np.log(2 * np.sin(x / 2)) - np.cos(np.multiply.outer(x, k)) @ (1.0 / k)
    near = np.geomspace(1e-14, 1.0 / n, 40)
    far = np.linspace(1.0 / n, math.pi, 16 * n + 1)
    edges = np.concatenate(([0.0], near, far[1:]))
    return 2 * _integrate_abs(rem, edges)


@pytest.mark.parametrize("n", [16, 32])
def test_inv_n_error_against_closed_form(n):
    tr = diag.convergence_trace(make_family("inv_n"), [n])
    plan = syn.PlanPolicy().plan(n)
    true_err = inv_n_remainder_norm(n)
    ref_gap = inv_n_remainder_norm(plan.N_ref)
    assert abs(tr.err[0] - true_err) <= ref_gap + 1e-6
    # the certified bound really covers the reference truncation
    assert tr.err_bound[0] >= true_err
    assert syn.tail_bound(make_family("inv_n"), plan.N_ref) >= ref_gap


INV_N_ERR = [0.3954458519, 0.2273375907, 0.1281251386, 0.07115600477, 0.03908437914,
             0.02128283271, 0.01150822139]
INV_LOG_ERR = [3.19413635, 2.978314171, 2.805130413, 2.667062391, 2.558381017,
               2.469881344, 2.396131879]


def test_convergence_trace_regression():
    grid = [2 ** j for j in range(4, 11)]
    a = diag.convergence_trace(make_family("inv_n"), grid)
    b = diag.convergence_trace(make_family("inv_log"), grid)
    np.testing.assert_allclose(a.err, INV_N_ERR, rtol=1e-8)
    np.testing.assert_allclose(b.err, INV_LOG_ERR, rtol=1e-8)
    assert a.verdict == "both vanish"
    assert b.verdict == "both persist"
    assert b.coeff_log[-1] == pytest.approx(0.5 * math.log(1024) / math.log(1026), rel=1e-12)
    assert set(a.flags) == {syn.CERTIFIED}
    assert a.cond2 == [0.0] * len(grid)
    assert [r["n"] for r in a.rows()] == grid


def test_trace_without_tail_metadata():
    tr = diag.convergence_trace(make_family("constant"), [4, 8])
    assert tr.flags == [syn.ESTIMATE_ONLY] * 2
    # no certified tail: the bound column repeats the estimate
    assert tr.err_bound == tr.err


def test_finite_polynomial_converges_exactly():
    tr = diag.convergence_trace(make_family("finite", coeffs=[1.0, 0.5]), [1, 2, 4, 8])
    assert max(tr.err) <= 1e-10


@pytest.mark.parametrize("fid", ["inv_n", "inv_log", "inv_log_sq", "oscillating_mvbv"])
def test_lemma2(fid):
    for n in (16, 64):
        res = diag.lemma2_check(make_family(fid), n)
        assert res["pass"] and res["constant"] == pytest.approx(3 / math.sqrt(math.pi))


def test_lemma2_sector():
    res = diag.lemma2_check(make_family("complex_sector", phi=0.6), 32)
    assert "sector-corrected" in res["flags"]
    assert res["constant"] == pytest.approx(3 / math.sqrt(math.pi) / math.cos(0.6))
    assert res["pass"]


def test_necessity_constants():
    res = diag.necessity_check(make_family("inv_n"), [2 ** j for j in range(6, 13)])
    assert res["non_growing"]
    row = res["rows"][0]
    assert row["lhs"] == pytest.approx(math.log(64) / 256)
    assert row["i2"] == pytest.approx(sum(1 / (2 * (64 + j) * j) for j in range(1, 8)))


def test_best_approx_proxy():
    seq = make_family("inv_n")
    tr = diag.convergence_trace(seq, [64])
    best = diag.best_approx_proxy(seq, 64)
    assert 0 < best < tr.err[0]
    assert diag.best_approx_proxy(make_family("finite", coeffs=[1, 2, 3]), 4) < 1e-12


COS = syn.sample_partial_sum(make_family("finite", coeffs=[0.0, 1.0]), 1, 4096)


def test_modulus_of_cosine():
    np.testing.assert_allclose(COS.real, np.cos(uniform_grid(4096)), atol=1e-13)
    # ||cos(.+h) - cos|| = 8 |sin(h/2)|
    assert diag.modulus_of_continuity(COS, math.pi / 2) == pytest.approx(8 * math.sin(math.pi / 4), abs=1e-4)
    ts = np.linspace(0, math.pi, 16)
    om = [diag.modulus_of_continuity(COS, t) for t in ts]
    assert all(b >= a for a, b in zip(om, om[1:]))
    assert om[0] == 0.0


def test_modulus_subsampled_shifts_and_warning():
    full = diag.modulus_of_continuity(COS, 1.0)
    assert diag.modulus_of_continuity(COS, 1.0, max_shifts=5) == pytest.approx(full, rel=1e-12)
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        diag.modulus_of_continuity(COS, 1e-5)
    assert any(issubclass(x.category, diag.CoarseShiftWarning) for x in w)
    with pytest.raises(ValueError):
        diag.modulus_of_continuity(COS, 4.0)


def test_doubling():
    grid = [2 ** j for j in range(1, 11)]
    assert diag.doubling_check(diag.psi_power(0.5), grid)["ok"]
    assert diag.doubling_check(diag.psi_inverse(1), grid)["ok"]
    assert not diag.doubling_check(diag.psi_geometric(2), grid)["ok"]


def test_rate_check_inv_pow():
    rep = diag.rate_check(make_family("inv_pow", alpha=2), diag.psi_inverse(1),
                          [2 ** j for j in range(4, 9)])
    assert rep.doubling_ok and rep.consistent
    assert all(rep.bounded.values())
    # inv_n decays like log(n)/n, so the error ratio to 1/n grows
    rep = diag.rate_check(make_family("inv_n"), diag.psi_inverse(1), [2 ** j for j in range(4, 9)])
    assert not rep.bounded["coeff"]


def test_rate_check_rejects_increasing_psi():
    with pytest.raises(ValueError):
        diag.rate_check(make_family("inv_n"), diag.Psi("n", float), [4, 8])


def test_corollary3():
    with pytest.raises(ValueError):
        diag.corollary3_check(make_family("inv_n"), 1, [16, 32])
    res = diag.corollary3_check(make_family("inv_pow", alpha=3), 1, [16, 32, 64])
    assert res["report"].psi_id == "smoothness(r=1)"
    assert all(p > 0 for p in res["report"].psi)
