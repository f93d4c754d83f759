"""Dirichlet character group: orthogonality, conductors, primitivity."""
import math
from itertools import product

import numpy as np
import pytest

from ekconst import (build_group, conductor_grid, enumerate_characters,
                     primitive_characters, principal_character, totient)


def _value_matrix(q):
    group = build_group(q)
    chars = enumerate_characters(group)
    return group, chars, np.array([c.value_table() for c in chars])


@pytest.mark.parametrize("q", [1, 2, 3, 4, 5, 8, 9, 12, 16, 24, 45, 60])
def test_character_count_is_totient(q):
    assert len(enumerate_characters(build_group(q))) == totient(q)


def test_row_orthogonality_small_moduli():
    # sum_n chi(n) conj(chi'(n)) over a period = phi(q) [chi = chi']
    for q in range(1, 61):
        _, chars, mat = _value_matrix(q)
        gram = mat @ mat.conj().T
        target = totient(q) * np.eye(len(chars))
        assert np.max(np.abs(gram - target)) < 1e-10, q


def test_column_orthogonality_small_moduli():
    # sum_chi chi(m) conj(chi(n)) = phi(q) [m = n on units]
    for q in range(2, 41):
        _, chars, mat = _value_matrix(q)
        gram = mat.conj().T @ mat
        units = [n for n in range(q) if math.gcd(n, q) == 1]
        for m, n in product(units, repeat=2):
            want = totient(q) if m == n else 0.0
            assert abs(gram[m, n] - want) < 1e-10, (q, m, n)


def test_values_are_roots_of_unity_or_zero():
    for q in (7, 12, 16, 45):
        for chi in enumerate_characters(build_group(q)):
            table = chi.value_table()
            for n in range(q):
                if math.gcd(n, q) == 1:
                    assert abs(abs(table[n]) - 1.0) < 1e-12
                else:
                    assert table[n] == 0


def test_complete_multiplicativity():
    for q in (5, 8, 9, 12):
        for chi in enumerate_characters(build_group(q)):
            table = chi.value_table()
            for m in range(1, 3 * q):
                for n in range(1, 3 * q):
                    lhs = chi.evaluate(m * n)
                    rhs = chi.evaluate(m) * chi.evaluate(n)
                    assert abs(lhs - rhs) < 1e-12
            # period q
            for n in range(2 * q):
                assert chi.evaluate(n) == table[n % q]


def test_principal_character_is_indicator_of_units():
    for q in (1, 2, 6, 10, 36):
        chi0 = principal_character(build_group(q))
        assert chi0.is_principal
        for n in range(q):
            want = 1.0 if math.gcd(n, q) == 1 else 0.0
            assert chi0.evaluate(n) == want


def test_conductor_via_factorization_oracle():
    # the conductor is the least d | q through which the table factors:
    # chi(n) = chi(m) whenever n = m mod d on units
    for q in (8, 9, 12, 15, 16, 24, 40):
        group = build_group(q)
        for chi in enumerate_characters(group):
            units = [n for n in range(1, q + 1) if math.gcd(n, q) == 1]
            cond = None
            for d in sorted(set(d for d in range(1, q + 1) if q % d == 0)):
                classes = {}
                ok = True
                for n in units:
                    key = n % d
                    val = chi.evaluate(n)
                    if key in classes and abs(classes[key] - val) > 1e-12:
                        ok = False
                        break
                    classes[key] = val
                if ok:
                    cond = d
                    break
            assert chi.conductor == cond, (q, chi.exponents)
            assert chi.is_primitive == (cond == q)


def test_conductor_grid_matches_per_character():
    # the grid is indexed by the exponent tuple, one axis per component
    for q in (1, 2, 3, 4, 8, 9, 12, 36, 100, 101):
        group = build_group(q)
        grid = conductor_grid(group)
        chars = enumerate_characters(group)
        assert grid.size == len(chars)
        for chi in chars:
            want = chi.conductor
            got = grid[chi.exponents] if chi.exponents else grid.reshape(-1)[0]
            assert got == want, (q, chi.exponents)


def test_conductor_partition_counts():
    # the number of characters mod q of conductor d equals the number of
    # primitive characters mod d
    prim_count = {}
    for d in range(1, 201):
        prim_count[d] = sum(1 for _ in primitive_characters(build_group(d)))
    for q in range(1, 201):
        grid = conductor_grid(build_group(q)).reshape(-1)
        assert grid.size == totient(q)
        for d in set(grid.tolist()):
            assert q % d == 0, (q, d)
            assert int(np.sum(grid == d)) == prim_count[d], (q, d)


def test_no_primitive_characters_mod_2_mod_4():
    for m in range(2, 203, 4):
        assert primitive_characters(build_group(m)) == []


def test_mod_8_conductors():
    grid = sorted(conductor_grid(build_group(8)).reshape(-1).tolist())
    assert grid == [1, 4, 8, 8]


def test_parity_and_order():
    for q in (3, 4, 5, 8, 12):
        for chi in enumerate_characters(build_group(q)):
            val = chi.evaluate(q - 1)  # chi(-1)
            assert abs(val - chi.parity) < 1e-12
            assert chi.parity in (1, -1)
            # order divides phi(q): chi^order = principal
            n = 3 if math.gcd(3, q) == 1 else (q + 1 if math.gcd(q + 1, q) == 1 else 1)
            assert abs(chi.evaluate(n) ** chi.order - 1.0) < 1e-10


def test_group_rejects_bad_modulus():
    with pytest.raises(ValueError):
        build_group(0)
    with pytest.raises(ValueError):
        build_group(-3)
