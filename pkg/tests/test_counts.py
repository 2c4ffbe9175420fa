import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from primeloc.arith import scale_params
from primeloc.counts import (
    XiBudgetExceeded,
    compute_E,
    compute_E_lower,
    cone_member,
    count_Nploc,
    count_Nprime,
    default_B,
    delta_loc,
    delta_mix,
    ell2,
    enumerate_Omega,
    enumerate_Xi,
    eps_xy,
    iota,
    variance_experiment,
    zeta,
)
from primeloc.forms import diagonal_form, monomial_basis, veronese
from primeloc.lattice import d2_formula

SIG = diagonal_form(2, 3, (1, 1, -1, -1))


def _is_prime(q):
    return q > 1 and all(q % k for k in range(2, math.isqrt(q) + 1))


def _brute_Xi(k, R2):
    P = [q for q in range(2, math.isqrt(R2) + 1) if _is_prime(q)]
    return sorted(
        x for x in itertools.product(P, repeat=k) if sum(t * t for t in x) <= R2 and len(set(x)) > 1
    )


def test_Xi_examples():
    assert len(enumerate_Xi(2, 3, 16)) == 0  # radius 4 < 2 sqrt(4) admits only (2,2,2,2)
    Xi = enumerate_Xi(2, 3, 100)
    T = Xi.tuples()
    assert len(T) == 158 and (2, 3, 3, 2) in T and (3, 3, 3, 3) not in T
    assert T == _brute_Xi(4, 100)


@pytest.mark.parametrize("d,n,B", [(2, 2, 30), (2, 3, 250), (3, 3, 40), (1, 2, 9)])
def test_Xi_against_brute(d, n, B):
    Xi = enumerate_Xi(d, n, B)
    R2 = math.floor(B ** (2 / (n + 1 - d)) + 1e-9)
    assert Xi.tuples() == _brute_Xi(n + 1, R2)
    assert Xi.radius == pytest.approx(math.sqrt(R2))


def test_Xi_errors():
    with pytest.raises(ValueError):
        enumerate_Xi(3, 2, 100)
    with pytest.raises(XiBudgetExceeded):
        enumerate_Xi(2, 3, 10**4, budget=100)


def test_cone_member_exact_tie():
    # parallel vectors: 4 gamma^2 <v,t>^2 = |v|^2 |t|^2 exactly at gamma = 1/2
    assert cone_member((1, 0), (2, 0), 0.5)
    assert not cone_member((1, 0), (2, 0), 0.5000001)
    assert cone_member((1, 0), (0, 3), 1e9)
    assert cone_member([1.0, 0.0], [0.0, 3.0], 1e9)


def test_signature_count_oracle():
    rep = count_Nprime(SIG, 100)
    brute = [x for x in _brute_Xi(4, 100) if SIG(x) == 0]
    assert rep.solutions == len(brute) == 12 and list(rep.solution_list) == brute
    assert rep.N_prime == pytest.approx(math.log(100) ** 4 * 12, rel=1e-12)
    assert count_Nprime(diagonal_form(2, 3, (1, 1, 1, 1)), 100).solutions == 0


def test_Nploc_against_direct_sum():
    B = 100.0
    sp = scale_params(B)
    a = SIG.coeffs
    basis = SIG.basis
    total = 0.0
    for x in _brute_Xi(4, 100):
        nu = veronese(x, basis)
        ip = sum(c * v for c, v in zip(a, nu))
        nn = sum(v * v for v in nu)
        if ip % sp.W == 0 and 4 * Fraction(sp.alpha) ** 2 * ip * ip <= nn * SIG.norm_sq:
            total += 1 / math.sqrt(nn)
    want = math.log(B) ** 4 * sp.alpha * sp.W / SIG.norm * total
    assert count_Nploc(SIG, B).N_ploc == pytest.approx(want, rel=1e-12)
    assert count_Nploc(SIG, B).N_ploc == pytest.approx(688.389682711386, rel=1e-12)


def test_count_json_and_mismatch():
    Xi = enumerate_Xi(2, 3, 100)
    js = count_Nprime(SIG, 100, Xi).to_json()
    assert js["solutions"] == 12 and len(js["solution_list"]) == 12
    with pytest.raises(ValueError):
        count_Nprime(SIG, 120, Xi)


def test_delta_statistics_nonnegative():
    assert delta_mix(SIG, 100) > 0
    assert delta_loc(SIG, 100) > 0
    pos = diagonal_form(2, 3, (1, 1, 1, 1))
    assert delta_mix(pos, 100) == 0.0


def test_Omega_pairs():
    Xi = enumerate_Xi(2, 3, 60)
    om = enumerate_Omega(2, 3, 60, Xi)
    assert len(om) == len(Xi) * (len(Xi) - 1) and all(x != y for x, y in om)


def test_E_methods_agree():
    assert compute_E(2, 3, 40) == pytest.approx(compute_E(2, 3, 40, method="intersect"), rel=1e-12)
    assert compute_E(2, 3, 40) == pytest.approx(69616.6734641628, rel=1e-12)
    assert compute_E(2, 3, 50) == pytest.approx(309577.1079896572, rel=1e-12)


def test_E_sandwich_lower():
    for B in (40, 80):
        assert compute_E_lower(2, 3, B) <= compute_E(2, 3, B)
        assert compute_E(2, 3, B) >= B**2


def test_E_pair_term_matches_lattice_formula():
    # det(Lambda_u cap Lambda_v) = sqrt(gram(u, v)) / G(u, v)
    basis = monomial_basis(2, 3)
    x, y = (2, 3, 5, 7), (3, 2, 7, 5)
    u, v = veronese(x, basis), veronese(y, basis)
    from primeloc.lattice import intersect, solution_lattice

    assert intersect(solution_lattice(u), solution_lattice(v)).det == pytest.approx(d2_formula(u, v))


def test_eps_xy_range():
    basis = monomial_basis(2, 3)
    e = eps_xy((2, 3, 5, 7), (3, 2, 7, 5), 1e6, basis)
    assert 0 <= e <= 2


def _brute_ell2(n, X, Y, Delta):
    k = n + 1
    xs = _brute_Xi(k, math.floor(X * X)) + [(q,) * k for q in range(2, 10) if _is_prime(q) and k * q * q <= X * X]
    ys = _brute_Xi(k, math.floor(Y * Y)) + [(q,) * k for q in range(2, 10) if _is_prime(q) and k * q * q <= Y * Y]
    c = 0
    for x in xs:
        for y in ys:
            if np.linalg.matrix_rank(np.array([x, y])) == 2 and d2_formula(x, y) <= Delta + 1e-12:
                c += 1
    return c


@pytest.mark.parametrize("n,X,Y,D", [(2, 6, 6, 40), (2, 10, 10, 3), (1, 12, 9, 5), (3, 8, 8, 10)])
def test_ell2_against_brute(n, X, Y, D):
    assert ell2(n, X, Y, D) == _brute_ell2(n, X, Y, D)


def test_ell2_frozen():
    assert ell2(2, 6, 6, 40) == 108


def test_iota_and_zeta():
    assert iota(2, 2) == pytest.approx(45 / (2 * math.pi**2))
    assert iota(2, 3) == pytest.approx(9450 / (48 * math.pi**4))
    assert zeta(2) == pytest.approx(math.pi**2 / 6)
    with pytest.raises(ValueError):
        iota(1, 2)
    with pytest.raises(ValueError):
        zeta(1)


def test_variance_experiment_rows():
    res = variance_experiment(2, 3, 5, B=60, m=20, seed=1)
    assert len(res.rows) == 20 and res.xi_size == len(enumerate_Xi(2, 3, 60))
    for r in res.rows:
        assert r["diff_sq"] == pytest.approx((r["N_prime"] - r["N_ploc"]) ** 2)
    assert res.mean_sq_diff == pytest.approx(np.mean([r["diff_sq"] for r in res.rows]))
    assert res == variance_experiment(2, 3, 5, B=60, m=20, seed=1, threads=4)


def test_default_B():
    assert default_B(10, 3, 0.1) == pytest.approx(10 * math.log(10) ** 8.1)


def test_statistics_are_even_in_a():
    # the representative +-a_V is never fixed, so nothing downstream may depend on it
    from primeloc.local import classify_ploc, sigma_prime, tau_prime

    f = diagonal_form(2, 3, (2, 1, -1, -3))
    g = -f
    assert count_Nprime(f, 100).to_json() == {**count_Nprime(g, 100).to_json(), "form": list(f.coeffs)}
    assert sigma_prime(f.coeffs, 8, f.basis) == sigma_prime(g.coeffs, 8, f.basis)
    assert tau_prime(f, 3.0, 50_000, seed=1) == tau_prime(g, 3.0, 50_000, seed=1)
    assert classify_ploc(f, p_max=13).verdict == classify_ploc(g, p_max=13).verdict
    assert delta_mix(f, 100) == delta_mix(g, 100) and delta_loc(f, 100) == delta_loc(g, 100)
