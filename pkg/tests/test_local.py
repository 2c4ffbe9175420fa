import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from primeloc.forms import Form, diagonal_form, gradient, monomial_basis
from primeloc.local import (
    RealConfig,
    classify_ploc,
    count_solution_residues,
    count_solution_residues_closed_form,
    default_r_max,
    estimate_density,
    estimate_obstruction,
    euler_phi,
    frak_J,
    frak_S,
    grad_valuation_class,
    polya_certificate,
    product_density,
    real_positive_soluble,
    sigma_mean_closed_form,
    sigma_mean_exact,
    sigma_prime,
    tau_prime,
    unit_solubility_padic,
    verify_padic_certificate,
)

SIG = diagonal_form(2, 3, (1, 1, -1, -1))
SQ4 = diagonal_form(2, 3, (1, 1, 1, 1))


def _brute_unit_zeros(f, p, r):
    """Independent scan: unit x mod p^r (x0 = 1) with f(x) = 0 mod p^r."""
    Q = p**r
    units = [u for u in range(Q) if u % p]
    return [x for x in itertools.product([1], *[units] * f.n) if f(x) % Q == 0]


# --- R+ ---------------------------------------------------------------------


def test_real_examples():
    assert real_positive_soluble(diagonal_form(2, 2, (1, 1, 1))).status == "Insoluble"
    v = real_positive_soluble(diagonal_form(2, 2, (1, 1, -1)))
    assert v.status == "Soluble" and all(t > 0 for t in v.witness) and v.residual < 1e-12
    diag = Form.from_coeffs(2, 1, (1, -2, 1))  # (x0 - x1)^2, zero only on the diagonal
    v = real_positive_soluble(diag)
    assert v.status == "Soluble" and v.witness == pytest.approx((math.sqrt(0.5),) * 2)


def test_polya_certificate():
    assert polya_certificate(diagonal_form(2, 2, (1, 1, 1))) == 0
    # x0^2 - x0 x1 + x1^2 needs one multiplication by (x0 + x1)
    assert polya_certificate(Form.from_coeffs(2, 1, (1, -1, 1))) == 1
    assert polya_certificate(Form.from_coeffs(2, 1, (1, -2, 1))) is None


def test_mesh_certifies_without_polya():
    cfg = RealConfig(polya_max=-1, samples=100)
    v = real_positive_soluble(Form.from_coeffs(2, 1, (1, -1, 1)), cfg)
    assert v.status == "Insoluble" and v.method == "mesh" and v.margin > v.lipschitz * v.mesh_h


@settings(max_examples=40)
@given(st.lists(st.integers(-5, 5), min_size=6, max_size=6).filter(any))
def test_real_insoluble_has_no_sign_change(coeffs):
    f = Form.from_coeffs(2, 2, coeffs)
    v = real_positive_soluble(f, RealConfig(samples=2000))
    if v.status == "Insoluble":
        rng = np.random.default_rng(0)
        U = rng.random((20000, 3)) + 1e-9
        vals = np.array([f(tuple(u)) for u in U[:2000]])
        assert (vals > 0).all() or (vals < 0).all()
    elif v.status == "Soluble":
        assert all(t > 0 for t in v.witness) and abs(f(v.witness)) <= 1e-9 * math.sqrt(f.norm_sq)


# --- Z_p^x --------------------------------------------------------------------


def test_padic_examples():
    v = unit_solubility_padic(SQ4, 2)
    assert (v.status, v.level) == ("Insoluble", 3)
    assert _brute_unit_zeros(SQ4, 2, 3) == [] and _brute_unit_zeros(SQ4, 2, 2) != []
    v = unit_solubility_padic(SIG, 2)
    assert (v.status, v.level, v.grad_valuation) == ("Soluble", 3, 1)
    for p in (3, 5):
        v = unit_solubility_padic(SIG, p)
        assert (v.status, v.level, v.grad_valuation) == ("Soluble", 1, 0)
        assert verify_padic_certificate(SIG, v)


@settings(max_examples=40)
@given(st.lists(st.integers(-6, 6), min_size=6, max_size=6).filter(any), st.sampled_from([2, 3, 5, 7]))
def test_padic_verdicts_recheck(coeffs, p):
    f = Form.from_coeffs(2, 2, coeffs)
    v = unit_solubility_padic(f, p, r_max=4)
    if v.status == "Soluble":
        x, e = v.witness, v.grad_valuation
        assert all(t % p for t in x) and f(x) % p ** (2 * e + 1) == 0
        assert verify_padic_certificate(f, v)
        assert min(_vp(g, p) for g in gradient(f, x)) >= e
    elif v.status == "Insoluble":
        assert _brute_unit_zeros(f, p, v.level) == []


def _vp(v, p):
    if v == 0:
        return math.inf
    k = 0
    while v % p == 0:
        v, k = v // p, k + 1
    return k


def test_padic_input_checks():
    with pytest.raises(ValueError):
        unit_solubility_padic(SIG, 4)
    with pytest.raises(ValueError):
        unit_solubility_padic(SIG, 2, r_max=0)
    assert default_r_max(2) == 7


def test_grad_valuation_examples():
    b = monomial_basis(2, 3)
    assert grad_valuation_class(SQ4, 2, 3) == frozenset()
    assert 1 in grad_valuation_class(SIG.coeffs, 2, 3, b)
    assert 0 in grad_valuation_class(SIG, 5, 1)


@settings(max_examples=40)
@given(st.lists(st.integers(-6, 6), min_size=6, max_size=6).filter(any), st.sampled_from([(2, 3), (3, 2), (5, 1)]))
def test_grad_class_consistent_with_padic(coeffs, pr):
    p, r = pr
    f = Form.from_coeffs(2, 2, coeffs)
    es = grad_valuation_class(f, p, r)
    if es and 2 * min(es) + 1 <= r:
        assert unit_solubility_padic(f, p, r_max=r).status == "Soluble"


# --- sigma' -------------------------------------------------------------------


def test_sigma_examples():
    b = monomial_basis(2, 1)
    assert sigma_prime((1, 0, -1), 1, b) == 1
    assert sigma_prime((1, 0, -1), 3, b) == 3
    assert euler_phi(12) == 4 and euler_phi(1) == 1


def test_sigma_crt_multiplicative():
    rng = np.random.default_rng(0)
    for d, n in ((2, 1), (1, 2), (3, 1), (1, 3)):
        b = monomial_basis(d, n)
        for Q1, Q2 in ((2, 3), (3, 4), (4, 5), (3, 8), (2, 9), (5, 4)):
            if Q1 * Q2 > 24:
                continue
            for a in rng.integers(-12, 13, size=(15, b.N)).tolist():
                assert sigma_prime(a, Q1 * Q2, b) == sigma_prime(a, Q1, b) * sigma_prime(a, Q2, b)


def test_sigma_mean_identity_small():
    for (p, r), (d, n) in {(2, 1): (2, 1), (3, 1): (1, 3), (2, 2): (1, 2), (5, 1): (1, 2)}.items():
        b = monomial_basis(d, n)
        assert sigma_mean_exact(p, r, b) == sigma_mean_closed_form(p, b.N)


def test_residue_count_examples():
    assert count_solution_residues((1, 1, 1, 1), 3, 1, N=4) == 26
    assert count_solution_residues((1, 2), 3, 1, N=4) == 26
    assert count_solution_residues((1, 1), 2, 1, N=3) == 3
    assert count_solution_residues((1, 1), 2, 2, N=3) == 12
    for b, p, r, N in (((1, 2), 3, 1, 3), ((1, 3, 5, 7), 2, 2, 4), ((2, 3), 5, 1, 3), ((1, 1), 3, 2, 3)):
        want = count_solution_residues_closed_form(p, r, N)
        assert count_solution_residues(b, p, r, N=N) == want
        assert count_solution_residues(b, p, r, N=N, method="enumerate") == want


def test_frak_S():
    f = Form.from_coeffs(2, 2, (1, 2, -3, 0, 5, -1))
    assert frak_S(f, 100) == 1
    assert frak_S(f, 1e6) == sigma_prime(f.coeffs, 8, f.basis)
    assert frak_S(-f, 1e6) == frak_S(f, 1e6)


# --- tau' ---------------------------------------------------------------------


def test_tau_half_gamma_closed_form():
    est = tau_prime(diagonal_form(2, 2, (1, 1, -1)), 0.5, samples=400_000, seed=3)
    assert abs(est.estimate - math.pi / 12) <= 3 * est.stderr


def test_tau_positive_form_vanishes():
    assert tau_prime(diagonal_form(2, 2, (1, 1, 1)), 1e3, samples=100_000).estimate == 0.0


def test_tau_against_angular_quadrature():
    # a = x0^2 - x1^2, gamma = 10: the cone condition depends only on the angle
    gamma = 10.0
    th = (np.arange(2_000_000) + 0.5) * (math.pi / 2) / 2_000_000
    s2 = np.sin(2 * th)
    ok = np.abs(np.cos(2 * th)) <= math.sqrt(2) * np.sqrt(1 - s2**2 / 4) / (2 * gamma)
    exact = gamma * 0.5 * ok.mean() * (math.pi / 2)
    est = tau_prime(Form.from_coeffs(2, 1, (1, 0, -1)), gamma, samples=10**6, seed=1)
    assert abs(est.estimate - exact) <= 3 * est.stderr


def test_tau_upper_bound_and_thread_invariance():
    f = Form.from_coeffs(2, 2, (3, -1, 2, 0, -5, 1))
    a = tau_prime(f, 4.0, samples=200_000, seed=5, threads=1)
    b = tau_prime(f, 4.0, samples=200_000, seed=5, threads=4)
    assert a == b
    assert a.estimate <= 4.0 * (4 / 3 * math.pi) / 8


def test_frak_J_delegates():
    f = Form.from_coeffs(2, 2, (3, -1, 2, 0, -5, 1))
    assert frak_J(f, math.e, samples=50_000, seed=2) == tau_prime(f, 1.0, samples=50_000, seed=2)
    j1, j2 = frak_J(f, 1e4, 200_000, 1), frak_J(f, 1e4, 200_000, 2)
    assert abs(j1.estimate - j2.estimate) <= 3 * math.hypot(j1.stderr, j2.stderr)


# --- assembly -----------------------------------------------------------------


def test_classify_examples():
    prof = classify_ploc(SIG, p_max=13)
    assert prof.verdict == "PLocSoluble" and set(prof.padic) == {2, 3, 5, 7, 11, 13}
    prof = classify_ploc(SQ4, p_max=13)
    assert prof.verdict == "PLocInsoluble" and prof.obstruction == "R+"
    js = prof.to_json()
    assert js["p_max"] == 13 and js["r_max"] == 7


def test_density_small_run():
    e = estimate_density(2, 3, 20, 80, p_max=13, seed=4)
    assert e.soluble + e.insoluble + e.undetermined == 80
    assert 0 < e.rho_hat < 1
    assert e == estimate_density(2, 3, 20, 80, p_max=13, seed=4, threads=3)


def test_obstruction_estimates():
    s2 = estimate_obstruction(2, 2, 2, 300, r_max=5, seed=0)
    assert s2.s_hat > 0.1
    s13 = estimate_obstruction(13, 2, 3, 200, r_max=2, seed=0)
    assert s13.s_hat < 0.05
    sinf = estimate_obstruction("inf", 2, 2, 200, seed=0, real_cfg=RealConfig(samples=2000))
    assert 0 < sinf.s_hat < 1
    val, se = product_density([s2, sinf])
    assert val == pytest.approx((1 - s2.s_hat) * (1 - sinf.s_hat)) and se > 0
