import cmath
from math import gcd, log, sqrt

import numpy as np
import pytest

from digitprime import GuardError
from digitprime.bitconstraint import (
    count_constrained, enumerate_constrained, make_constraint, restrict_low_bits)
from digitprime.characters import (
    character_group, conductor_and_primitive, gauss_sum, interval_twisted_lambda_max,
    psi_chi, split_two_part, twisted_digit_sum, twisted_digit_sum_even_split,
    twisted_digit_sum_fourier, twisted_fourier_bound, unit_group,
    verify_gauss_factorization, verify_twist_identity)
from digitprime.numthy import build_sieve, chebyshev_psi, totient
from conftest import random_constraint
from oracles import brute_characters


@pytest.fixture(scope="module")
def t16():
    return build_sieve(1 << 16)


def nonprincipal(q):
    return next(chi for chi in character_group(q) if not chi.is_principal)


def _key(values, units):
    return tuple(complex(round(values[a].real, 9), round(values[a].imag, 9)) + 0
                 for a in units)


@pytest.mark.parametrize("q", [1, 2, 3, 4, 5, 8, 12])
def test_group_matches_brute_force(q):
    units = [a for a in range(q) if gcd(a, q) == 1]
    ours = {_key(chi.values, units) for chi in character_group(q)}
    brute = {_key(table, units) for table in brute_characters(q)}
    assert ours == brute
    assert len(character_group(q)) == totient(q)


def test_group_examples():
    (triv,) = character_group(1)
    assert triv.conductor == 1 and triv(0) == 1
    chi = nonprincipal(3)
    assert chi(2) == -1 and chi.conductor == 3
    assert {chi.conductor for chi in character_group(8)} == {1, 4, 8}


def test_character_is_multiplicative_and_periodic():
    for q in (7, 9, 16, 20, 21, 45):
        for chi in character_group(q):
            for a in range(q):
                assert chi(a + q) == chi(a)
                for b in range(q):
                    assert abs(chi(a * b) - chi(a) * chi(b)) < 1e-12
                if gcd(a, q) != 1:
                    assert chi(a) == 0


def test_conductor_examples():
    assert conductor_and_primitive(character_group(10)[0])[0] == 1
    chi = nonprincipal(6)
    q1, chi1 = conductor_and_primitive(chi)
    assert q1 == 3
    for a in range(6):
        if gcd(a, 6) == 1:
            assert chi(a) == chi1(a)
    p = nonprincipal(5)
    assert conductor_and_primitive(p) == (5, p)


def test_conductor_is_minimal_and_idempotent():
    for q in range(1, 101):
        for chi in character_group(q):
            q1, chi1 = conductor_and_primitive(chi)
            assert chi1.primitive and q % q1 == 0
            assert conductor_and_primitive(chi1) == (q1, chi1)
            for a in range(q):
                if gcd(a, q) == 1:
                    assert abs(chi(a) - chi1(a)) < 1e-12
            # no proper divisor d of q1 has chi periodic mod d on the units
            for d in range(1, q1):
                if q1 % d == 0:
                    assert any(abs(chi(a) - chi(b)) > 1e-9 for a in range(q) for b in range(q)
                               if gcd(a * b, q) == 1 and (a - b) % d == 0), (q, d)


def test_orthogonality():
    for q in range(1, 101):
        mat = np.array([chi.values for chi in character_group(q)])
        gram = mat @ mat.conj().T
        assert np.max(np.abs(gram - totient(q) * np.eye(len(mat)))) < 1e-9


def test_gauss_examples():
    assert gauss_sum(character_group(1)[0]) == pytest.approx(1)
    assert gauss_sum(nonprincipal(3)) == pytest.approx(1j * sqrt(3), abs=1e-12)


def test_gauss_magnitude_primitive():
    for q in range(1, 501):
        for chi in character_group(q):
            if chi.primitive:
                assert abs(abs(gauss_sum(chi)) ** 2 - q) < 1e-9


def test_gauss_factorization_all_q():
    for q in range(1, 201):
        for chi in character_group(q):
            rep = verify_gauss_factorization(chi)
            assert rep.discrepancy < 1e-9, (q, chi)
            if rep.params["vanishing"]:
                assert rep.params["lhs_abs"] < 1e-9


def test_gauss_factorization_examples():
    chi12 = next(chi for chi in character_group(12) if chi.conductor == 3)
    assert verify_gauss_factorization(chi12).discrepancy < 1e-9
    chi9 = next(chi for chi in character_group(9) if chi.conductor == 3)
    assert abs(gauss_sum(chi9.conj())) < 1e-9


def test_twist_identity_primitive():
    for q in (3, 5, 7, 8, 11, 13):
        for chi in character_group(q):
            if not chi.primitive:
                continue
            for k in range(q):
                direct = sum(chi(a) * cmath.exp(2j * cmath.pi * a * k / q)
                             for a in range(1, q + 1))
                assert abs(direct - chi.conj()(k) * gauss_sum(chi)) < 1e-9
                assert verify_twist_identity(chi, k).discrepancy < 1e-9


def test_twist_identity_q15():
    chi = next(chi for chi in character_group(15) if chi.conductor == 3)
    for k in range(15):
        rep = verify_twist_identity(chi, k)
        assert rep.params["case"] == "coprime" and rep.discrepancy < 1e-9
        assert rep.params["combined_discrepancy"] < 1e-9


def test_twist_identity_k_zero():
    for q in (5, 12, 15):
        for chi in character_group(q):
            if not chi.is_principal:
                assert abs(sum(chi.values)) < 1e-12
                assert verify_twist_identity(chi, 0).discrepancy < 1e-9


def test_twist_identity_non_coprime_vanishes():
    chi = next(chi for chi in character_group(9) if chi.conductor == 3)
    for k in range(9):
        rep = verify_twist_identity(chi, k)
        if gcd(k, 9) == 1:
            assert rep.params["case"] == "vanishing"
        assert rep.discrepancy < 1e-9


def test_psi_chi(t16):
    assert psi_chi(1000, character_group(1)[0], t16) == pytest.approx(chebyshev_psi(1000, t16))
    val = psi_chi(10, nonprincipal(3), t16)
    assert val == pytest.approx(log(7 / 10), abs=1e-12)
    for chi in character_group(7):
        assert abs(psi_chi(5000, chi, t16)) <= chebyshev_psi(5000, t16) + 1e-9


def test_interval_max(t16):
    triv = character_group(1)[0]
    assert interval_twisted_lambda_max(triv, 1000, 1, t16) == pytest.approx(
        chebyshev_psi(1000, t16))
    assert interval_twisted_lambda_max(triv, 1000, 1000, t16) == pytest.approx(log(997))
    N = 1 << 16
    val = interval_twisted_lambda_max(nonprincipal(3), N, 16, t16)
    assert val < chebyshev_psi(N, t16) / 16
    with pytest.raises(ValueError):
        interval_twisted_lambda_max(triv, 10, 0, t16)


def test_twisted_sum_trivial_cases():
    c = make_constraint(10, [0, 4], [1, 1])
    triv = character_group(1)[0]
    assert twisted_digit_sum(c, triv, 1, 0) == count_constrained(c)
    xs = enumerate_constrained(c)
    assert twisted_digit_sum(c, triv, 3, 0) == int(np.sum(xs % 3 == 0))
    with pytest.raises(ValueError):
        twisted_digit_sum(c, nonprincipal(3), 3, 0)


def test_twisted_sum_example():
    c = make_constraint(10, [0], [1])
    chi = nonprincipal(5)
    direct = twisted_digit_sum(c, chi, 3, 2)
    assert abs(direct - twisted_digit_sum_fourier(c, chi, 3, 2)) < 1e-8
    oracle = sum(chi(k + 2) for k in range(c.N) if k % 2 == 1 and (k + 2) % 3 == 0)
    assert abs(direct - oracle) < 1e-9


def test_twisted_fourier_randomized(rng):
    for _ in range(30):
        c = random_constraint(rng, rng.randint(2, 12))
        q1 = rng.choice([3, 5, 7, 15])
        chi = rng.choice(character_group(q1))
        q0 = rng.choice([q for q in (1, 3, 5, 7, 9) if gcd(q, q1) == 1])
        b = rng.randrange(-50, 500)
        direct = twisted_digit_sum(c, chi, q0, b)
        assert abs(direct - twisted_digit_sum_fourier(c, chi, q0, b)) < 1e-8
        if chi.primitive:
            assert abs(direct) <= twisted_fourier_bound(c, chi, q0) + 1e-8


def test_fourier_rejects_even_modulus():
    with pytest.raises(ValueError):
        twisted_digit_sum_fourier(make_constraint(6, [0], [1]), nonprincipal(4), 1, 0)


def test_even_split_randomized(rng):
    for _ in range(20):
        c = random_constraint(rng, rng.randint(3, 12))
        q = rng.choice([6, 10, 12, 14, 20, 30])
        chi = rng.choice(character_group(q))
        q0 = rng.choice([q0 for q0 in (1, 3, 5, 7, 9) if gcd(q0, q) == 1])
        b = rng.randrange(200)
        direct = twisted_digit_sum(c, chi, q0, b)
        assert abs(direct - twisted_digit_sum_even_split(c, chi, q0, b)) < 1e-8


def test_even_split_errors():
    c = make_constraint(6, [0], [1])
    with pytest.raises(ValueError):
        twisted_digit_sum_even_split(c, nonprincipal(8), 1, 0)
    with pytest.raises(ValueError):
        twisted_digit_sum_even_split(c, nonprincipal(5), 1, 0)


def test_split_two_part():
    for chi in character_group(24):
        nu, chi0, rest = split_two_part(chi)
        assert nu == 3 and chi0.modulus == 8 and rest.modulus == 3
        for a in range(24):
            assert abs(chi(a) - chi0(a) * rest(a)) < 1e-12


def test_restricted_counts_partition(rng):
    for _ in range(10):
        c = random_constraint(rng, 10)
        for nu in (1, 2, 3):
            parts = [restrict_low_bits(c, nu, z) for z in range(1 << nu)]
            assert sum(count_constrained(f) for f in parts if f is not None) == \
                count_constrained(c)


def test_modulus_guard():
    with pytest.raises(GuardError):
        character_group(10_001)
    assert unit_group(10).exponent == 4
