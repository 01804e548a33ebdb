import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from l1fourier import synthesis as syn
from l1fourier.quadrature import uniform_grid
from l1fourier.sequences import EXAMPLE_DESCRIPTORS, NONNEG_ONLY, make_family, scaled

ALL = sorted(EXAMPLE_DESCRIPTORS)


def direct_sum(seq, ks, x):
    return sum(complex(seq(int(k))) * np.exp(1j * k * x) for k in ks)


@pytest.mark.parametrize("fid", ALL)
def test_fft_matches_pointwise(fid):
    seq = make_family(EXAMPLE_DESCRIPTORS[fid])
    M = 256
    x = uniform_grid(M)
    np.testing.assert_allclose(syn.sample_partial_sum(seq, 20, M), syn.partial_sum(seq, 20, x),
                               atol=1e-12)
    np.testing.assert_allclose(syn.partial_sum(seq, 20, x[:7]), direct_sum(seq, range(-20, 21), x[:7]),
                               atol=1e-12)


@pytest.mark.parametrize("n,mu", [(8, 1.5), (10, 1.25), (6, 2.0)])
def test_vallee_poussin_is_mean_of_partial_sums(n, mu):
    seq = make_family("oscillating_mvbv")
    x = np.linspace(-3, 3, 41)
    top = math.floor(mu * n)
    mean = sum(syn.partial_sum(seq, k, x) for k in range(n, top)) / (top - n)
    np.testing.assert_allclose(syn.vallee_poussin(seq, n, mu, x), mean, atol=1e-12)
    np.testing.assert_allclose(syn.sample_vallee_poussin(seq, n, mu, 128),
                               syn.vallee_poussin(seq, n, mu, uniform_grid(128)), atol=1e-12)


def test_degenerate_window():
    with pytest.raises(syn.DegenerateWindowError):
        syn.vallee_poussin(make_family("inv_n"), 1, 1.5, 0.0)
    with pytest.raises(ValueError):
        syn.vp_top(3, 1.2)


def test_symmetric_indices():
    assert syn.symmetric_indices(2).tolist() == [0, -1, 1, -2, 2]


@settings(max_examples=30)
@given(st.sampled_from(ALL), st.sampled_from(ALL), st.floats(-3, 3), st.integers(0, 40))
def test_linearity(f1, f2, a, n):
    s1 = make_family(EXAMPLE_DESCRIPTORS[f1])
    s2 = make_family(EXAMPLE_DESCRIPTORS[f2])
    M = 128
    lhs = a * syn.sample_partial_sum(s1, n, M) + syn.sample_partial_sum(s2, n, M)
    rhs = syn.sample_partial_sum(scaled(s1, a), n, M) + syn.sample_partial_sum(s2, n, M)
    np.testing.assert_allclose(lhs, rhs, atol=1e-11)


@pytest.mark.parametrize("fid", ALL)
def test_real_for_symmetric_families(fid):
    seq = make_family(EXAMPLE_DESCRIPTORS[fid])
    v = syn.sample_partial_sum(seq, 30, 128)
    f0 = seq(0)
    if seq.symmetry == "real_even" or (seq.symmetry == "conjugate" and f0.imag == 0):
        assert np.max(np.abs(v.imag)) < 1e-12


def test_complex_sector_imaginary_part_is_constant():
    # only f(0) = e^{i phi} breaks conjugate pairing, so Im S_n = sin(phi)
    seq = make_family("complex_sector", phi=0.6)
    v = syn.sample_partial_sum(seq, 30, 128)
    np.testing.assert_allclose(v.imag, math.sin(0.6), atol=1e-12)


def test_sample_size_guard():
    with pytest.raises(ValueError):
        syn.sample_partial_sum(make_family("inv_n"), 10, 20)


def test_derivative_of_cosine():
    seq = make_family("finite", coeffs=[0.0, 1.0])
    x = uniform_grid(64)
    np.testing.assert_allclose(syn.sample_derivative(seq, 1, 1, 64), -np.sin(x), atol=1e-13)
    np.testing.assert_allclose(syn.sample_derivative(seq, 2, 1, 64), -np.cos(x), atol=1e-13)


@pytest.mark.parametrize("fid", ALL)
def test_abel_decomposition(fid):
    seq = make_family(EXAMPLE_DESCRIPTORS[fid])
    grid = np.linspace(-math.pi, math.pi, 256)
    assert syn.abel_decomposition_residual(seq, 16, 1.5, grid) < 1e-10


def test_abel_needs_two_sided():
    seq = make_family({"family_id": "inv_n", "params": {}, "support": NONNEG_ONLY})
    with pytest.raises(IndexError):
        syn.abel_terms(seq, 8, 1.5, np.array([1.0]))


def test_tail_bound_monotone_and_certifies():
    for fid in ("inv_n", "inv_log", "oscillating_mvbv", "complex_sector", "analytic_inv_n"):
        seq = make_family(EXAMPLE_DESCRIPTORS[fid])
        b = [syn.tail_bound(seq, N, 2 ** 16) for N in (16, 64, 256, 1024)]
        assert all(x >= y for x, y in zip(b, b[1:])), fid
    # measured distance between two truncations stays below the bound of the shorter one
    seq = make_family("inv_n")
    M = 1 << 14
    d = np.abs(syn.sample_partial_sum(seq, 64, M) - syn.sample_partial_sum(seq, 1024, M))
    assert 2 * math.pi / M * d.sum() <= syn.tail_bound(seq, 64)


def test_tail_bound_special_cases():
    assert syn.tail_bound(make_family("finite", coeffs=[1, 2, 3]), 2) == 0.0
    assert syn.tail_bound(make_family("finite", coeffs=[1, 2, 3]), 1) == pytest.approx(2 * math.pi * 3)
    assert syn.tail_bound(make_family("constant"), 10) is None
    assert syn.tail_bound(make_family("lacunary_spike"), 100) > 0


def test_plan_policy():
    plan = syn.PlanPolicy().plan(16)
    assert (plan.N_ref, plan.M) == (256, 2048)
    with pytest.raises(ValueError):
        syn.SynthesisPlan(16, 1.5, 20, 160)
    ref = syn.reference_values(make_family("constant"), plan)
    assert ref.quality == syn.ESTIMATE_ONLY
    assert syn.reference_values(make_family("inv_n"), plan).quality == syn.CERTIFIED
