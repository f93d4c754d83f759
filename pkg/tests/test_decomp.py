"""Decomposition terms and the exact identity.

Every term has an independent route in here: literal character sums for the
conductor correction and the proxy defect, piecewise-exact integration for
the window terms (the implementation swaps summation and integration, the
oracle does not), plain enumeration for the progression and ramified terms.
"""
import math

import numpy as np
import pytest
from scipy.integrate import quad

from ekconst import (EULER_GAMMA, build_group, conductor_correction,
                     decompose, divisors, gamma_q, l_values, layer_weight,
                     mobius_layer_sum, phi_chi, primitive_characters,
                     primitive_phi_sum, progression_term, proxy_defect,
                     psi, psi_mod, ramified_term, totient, window_term)


def _prime_powers(tables, hi):
    pp = tables.prime_powers
    k = int(np.searchsorted(pp, math.floor(hi), side="right"))
    return pp[:k], tables.prime_power_logs[:k]


# ------------------------------------------------------------- layer sums


def test_mobius_layer_sum_literal_values():
    # q = 12, p = 2: the p-free part is 3, so only d in {1, 3} survive
    assert mobius_layer_sum(3, 2, 12) == 1
    assert mobius_layer_sum(1, 2, 12) == 0
    assert mobius_layer_sum(6, 2, 12) == 0   # p | d: empty sum
    assert mobius_layer_sum(12, 2, 12) == 0


def test_mobius_layer_sum_is_indicator():
    # collapses to [d == p-free part of q]
    for q in (4, 12, 45, 100, 360):
        for p in set(int(x) for x in _factor_list(q)):
            r = q
            while r % p == 0:
                r //= p
            for d in divisors(q):
                assert mobius_layer_sum(d, p, q) == (1 if d == r else 0)


def _factor_list(n):
    out = []
    m, p = n, 2
    while p * p <= m:
        while m % p == 0:
            out.append(p)
            m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


def test_layer_weight_dual_route():
    # layer_weight(p, v, q) must equal the uncollapsed double sum
    # sum_{d | p^v - 1} phi(d) * mobius_layer_sum(d, p, q)
    for q in (4, 12, 45, 100):
        for p in sorted(set(_factor_list(q))):
            pv = p
            v = 1
            while pv <= 10_000:
                direct = layer_weight(p, v, q)
                double = sum(totient(d) * mobius_layer_sum(d, p, q)
                             for d in divisors(q) if (pv - 1) % d == 0)
                assert direct == double, (p, v, q)
                pv *= p
                v += 1


# ------------------------------------------- conductor correction (B term)


def _b_brute_character_sum(q, x, tables):
    # pre-collapse triple sum: for each ramified prime power, weight by the
    # full primitive-character sum over every conductor dividing the p-free
    # part of q (including conductor 1)
    terms = []
    for p in sorted(set(_factor_list(q))):
        r = q
        while r % p == 0:
            r //= p
        chars = []
        for d in divisors(r):
            chars.extend(primitive_characters(build_group(d)))
        n = p
        while n <= x:
            s = sum(chi.evaluate(n) for chi in chars)
            assert abs(s.imag) < 1e-12
            terms.append(tables.lam[n] * (x - n) / n * s.real)
            n *= p
    return -math.fsum(terms) / (x - 1.0)


@pytest.mark.parametrize("q,x", [(4, 100.0), (12, 200.0), (45, 500.0),
                                 (8, 64.0)])
def test_conductor_correction_vs_brute_character_sum(q, x, tables_small):
    brute = _b_brute_character_sum(q, x, tables_small)
    got = conductor_correction(q, x, tables_small)
    assert got == pytest.approx(brute, abs=1e-12)


def test_conductor_correction_known_spots(tables_small):
    # frozen from the brute-force route above on first run
    assert conductor_correction(4, 100.0, tables_small) == pytest.approx(
        -0.647199924273, abs=1e-9)
    assert conductor_correction(12, 200.0, tables_small) == pytest.approx(
        -0.686807507086, abs=1e-9)


def test_conductor_correction_nonpositive_sample(tables_small):
    for q in range(1, 200):
        assert conductor_correction(q, 1e4, tables_small) <= 0.0, q


def test_trivial_modulus_terms_vanish(tables_small):
    # q = 1 has no prime factors and no nonprincipal characters
    assert conductor_correction(1, 1000.0, tables_small) == 0.0
    assert ramified_term(1, 1000.0, tables_small) == 0.0
    assert proxy_defect(1, 1000.0, tables_small) == 0.0


# ------------------------------------------------- ramified / progression


def test_ramified_term_direct_enumeration(tables_small):
    q, x = 12, 500.0
    want = []
    for n in range(2, 501):
        base = _factor_list(n)
        if len(set(base)) == 1 and q % base[0] == 0:
            want.append(math.log(base[0]) * (x - n) / n)
    assert ramified_term(q, x, tables_small) == pytest.approx(
        math.fsum(want) / (x - 1.0), abs=1e-12)


def test_ramified_term_nonnegative(tables_small):
    for q in (1, 2, 7, 12, 45, 128, 1999):
        for x in (10.0, 1e3, 1e4):
            assert ramified_term(q, x, tables_small) >= 0.0


def test_progression_term_direct_enumeration(tables_small):
    q, x = 7, 300.0
    full, prog = [], []
    for n in range(2, 301):
        base = _factor_list(n)
        if len(set(base)) == 1:
            v = math.log(base[0]) * math.log(x / n)
            full.append(v)
            if n % q == 1:
                prog.append(v)
    want = (totient(q) * math.fsum(prog) - math.fsum(full)) / (x - 1.0)
    assert progression_term(q, x, tables_small) == pytest.approx(want,
                                                                 abs=1e-12)


def test_progression_term_mod_one_vanishes(tables_small):
    # phi(1) = 1 and every n is 0 = 1 mod 1, so the bracket cancels exactly
    assert progression_term(1, 1e4, tables_small) == pytest.approx(0.0,
                                                                   abs=1e-15)


# ---------------------------------------------------------------- windows


def _window_oracle_piecewise(q, x, lo, hi, tables):
    # independent route: R(u) = phi(q) psi(u; q, 1) - psi(u) is a step
    # function, so integrate (x-u)/u^2 exactly on each flat piece using the
    # antiderivative -x/u - log(u)
    if hi <= lo:
        return 0.0
    pp, lg = _prime_powers(tables, hi)
    breaks = sorted({float(lo), float(hi)}
                    | {float(n) for n in pp if lo < n < hi})

    def anti(u):
        return -x / u - math.log(u)

    phi_q = totient(q)
    total = []
    for a, b in zip(breaks, breaks[1:]):
        r_val = phi_q * psi_mod(tables, a, q, 1 % q) - psi(tables, a)
        total.append(r_val * (anti(b) - anti(a)))
    return math.fsum(total) / (x - 1.0)


@pytest.mark.parametrize("q,x,x_split", [(5, 100.0, 25.0), (7, 2000.0, 49.0),
                                         (6, 10_000.0, 36.0),
                                         (12, 500.0, 12.0)])
def test_window_terms_vs_piecewise_integration(q, x, x_split, tables_small):
    for part, (lo, hi) in enumerate(
            [(1.0, float(q)), (float(q), x_split), (x_split, x)], start=1):
        got = window_term(q, x, x_split, tables_small, part)
        want = _window_oracle_piecewise(q, x, lo, hi, tables_small)
        assert got == pytest.approx(want, abs=1e-9), (q, part)


def test_window_piecewise_oracle_vs_scipy_quad(tables_small):
    # validate the oracle itself on a small window with few breakpoints
    q, x = 7, 49.0
    pp, _ = _prime_powers(tables_small, x)

    def integrand(u):
        r = totient(q) * psi_mod(tables_small, u, q, 1) - psi(
            tables_small, u)
        return r * (x - u) / (u * u)

    val, est_err = quad(integrand, q, x,
                        points=[float(n) for n in pp if q < n < x],
                        limit=200)
    want = _window_oracle_piecewise(q, x, q, x, tables_small)
    assert val / (x - 1.0) == pytest.approx(want, abs=1e-7)


def test_window_edge_cases(tables_small):
    # degenerate split points give empty windows, and the head+mid+tail
    # total is split-invariant
    q, x = 11, 3000.0
    assert window_term(q, x, float(q), tables_small, 2) == 0.0
    assert window_term(q, x, x, tables_small, 3) == 0.0
    totals = []
    for x_split in (float(q), 121.0, 1500.0, x):
        totals.append(math.fsum(
            window_term(q, x, x_split, tables_small, part)
            for part in (1, 2, 3)))
    for t in totals[1:]:
        assert t == pytest.approx(totals[0], abs=1e-10)


def test_window_part_validation(tables_small):
    with pytest.raises(ValueError):
        window_term(5, 100.0, 25.0, tables_small, 4)
    with pytest.raises(ValueError):
        window_term(5, 100.0, 3.0, tables_small, 1)   # x_split < q
    with pytest.raises(ValueError):
        window_term(5, 100.0, 200.0, tables_small, 1)  # x_split > x


# ------------------------------------------------------------ proxy defect


def test_primitive_phi_sum_vs_per_character(tables_small):
    for d in (1, 3, 4, 5, 8, 9, 12, 16, 45):
        want = math.fsum(
            phi_chi(chi, 5000.0, tables_small).real
            for chi in primitive_characters(build_group(d)))
        got = primitive_phi_sum(d, 5000.0, tables_small)
        assert got == pytest.approx(want, abs=1e-10), d


def test_primitive_phi_sum_imag_cancellation(tables_small):
    # the imaginary parts cancel in conjugate pairs; the integer-weight
    # route is real by construction, so compare against the complex total
    for d in (5, 7, 9):
        total = sum(phi_chi(chi, 2000.0, tables_small)
                    for chi in primitive_characters(build_group(d)))
        assert abs(total.imag) < 1e-12


def test_proxy_defect_vs_per_character(shared_cache, tables_small):
    for q in (4, 12, 45):
        want = []
        for d in divisors(q):
            if d == 1:
                continue
            for chi in primitive_characters(build_group(d)):
                want.append(l_values(chi).logderiv.real)
                want.append(phi_chi(chi, 2000.0, tables_small).real)
        got = proxy_defect(q, 2000.0, tables_small, shared_cache)
        assert got == pytest.approx(math.fsum(want), abs=1e-9), q


def test_proxy_defect_shrinks_with_x(shared_cache, tables_big):
    # the proxy converges to -L'/L, so the defect at 1e7 is much smaller
    # than at 1e3
    for q in (3, 4, 7):
        small = abs(proxy_defect(q, 1e3, tables_big, shared_cache))
        large = abs(proxy_defect(q, 1e7, tables_big, shared_cache))
        assert large < small
        assert large < 5e-3


# -------------------------------------------------------------- decompose


def test_identity_residual_spot_checks(shared_cache, tables_small):
    for q, x, x_split in [(3, 1000.0, 9.0), (12, 10_000.0, 144.0),
                          (45, 2025.0, 2025.0), (2, 100.0, 4.0),
                          (1, 50.0, 1.0), (30, 900.0, 900.0)]:
        rep = decompose(q, x, x_split, tables_small, shared_cache)
        assert abs(rep.residual) < 1e-9, (q, x, x_split)


def test_report_fields_consistent(shared_cache, tables_small):
    q, x, x_split = 12, 5000.0, 144.0
    rep = decompose(q, x, x_split, tables_small, shared_cache)
    assert rep.q == q and rep.x == x and rep.x_split == x_split
    assert rep.gamma_q_direct == gamma_q(q, shared_cache).value
    assert rep.proxy_defect == proxy_defect(q, x, tables_small, shared_cache)
    assert rep.conductor_correction == conductor_correction(q, x,
                                                            tables_small)
    assert rep.progression == progression_term(q, x, tables_small)
    assert rep.ramified == ramified_term(q, x, tables_small)
    assert rep.window_head == window_term(q, x, x_split, tables_small, 1)
    assert rep.window_mid == window_term(q, x, x_split, tables_small, 2)
    assert rep.window_tail == window_term(q, x, x_split, tables_small, 3)
    # reconstruct the residual from the published fields
    rhs = math.fsum([EULER_GAMMA, rep.proxy_defect,
                     rep.conductor_correction, rep.ramified,
                     -rep.progression, -rep.ramified, -rep.window_head,
                     -rep.window_mid, -rep.window_tail])
    assert rep.residual == rep.gamma_q_direct - rhs


def test_decompose_validation(shared_cache, tables_small):
    with pytest.raises(ValueError):
        decompose(5, 100.0, 3.0, tables_small, shared_cache)
    with pytest.raises(ValueError):
        decompose(5, 100.0, 101.0, tables_small, shared_cache)
    with pytest.raises(ValueError):
        decompose(5, 2e5, 25.0, tables_small, shared_cache)
    with pytest.raises(ValueError):
        decompose(0, 100.0, 1.0, tables_small, shared_cache)
