import json
from math import gcd, log
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from digitprime import GuardError
from digitprime.numthy import (
    ReducedFraction, build_sieve, chebyshev_psi, farey_odd_squarefree, mobius,
    odd_squarefree_below, ramanujan_sum, read_tables_csv, reduce_fraction, totient,
    write_tables_csv)
from oracles import direct_ramanujan

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="module")
def small():
    return build_sieve(10_000)


def test_golden_tables(small, tmp_path):
    golden = read_tables_csv(DATA / "golden_sieve.csv")
    for row in golden:
        k = row["k"]
        assert (int(small.lam_p[k]), int(small.mu[k]), int(small.phi[k])) == \
            (row["lambda_p"], row["mu"], row["phi"]), k
    write_tables_csv(small, tmp_path / "t.csv", len(golden))
    assert read_tables_csv(tmp_path / "t.csv") == golden


def test_small_tables():
    t = build_sieve(12)
    assert t.von_mangoldt(8) == pytest.approx(log(2))
    assert t.von_mangoldt(6) == 0
    assert t.von_mangoldt(7) == pytest.approx(log(7))
    assert [int(t.mu[k]) for k in (1, 6, 12)] == [1, 1, 0]
    assert (int(t.phi[12]), int(t.phi[1])) == (4, 1)


def test_divisor_sum_identities(small):
    for n in range(1, 10_001):
        divs = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
        divs = set(divs) | {n // d for d in divs}
        assert sum(int(small.mu[d]) for d in divs) == (1 if n == 1 else 0)
        assert sum(int(small.phi[d]) for d in divs) == n
        assert abs(sum(small.von_mangoldt(d) for d in divs) - log(n)) < 1e-9


def test_table_lookups_match_trial_division(small):
    for n in range(1, 3000, 7):
        assert mobius(n, small) == mobius(n)
        assert totient(n, small) == totient(n)


def test_sieve_guards(small):
    with pytest.raises(ValueError):
        chebyshev_psi(10_001, small)
    with pytest.raises(ValueError):
        build_sieve(-1)
    with pytest.raises(GuardError):
        build_sieve((1 << 30) + 1)


def test_psi_examples(small, sieve20):
    assert chebyshev_psi(1, small) == 0
    assert chebyshev_psi(10, small) == pytest.approx(
        3 * log(2) + 2 * log(3) + log(5) + log(7), abs=1e-12)
    assert abs(chebyshev_psi(10, small) - 7.832015) < 1e-6


def test_psi_million_golden():
    t = build_sieve(10 ** 6)
    golden = json.loads((DATA / "golden_values.json").read_text())["psi_1e6"]
    value = chebyshev_psi(10 ** 6, t)
    assert value == pytest.approx(golden, rel=1e-12)
    assert abs(value - 1e6) < 3e3


def test_psi_monotone(small):
    vals = [chebyshev_psi(x, small) for x in range(0, 2000)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_prime_counts_golden(sieve24):
    golden = json.loads((DATA / "golden_values.json").read_text())["primepi_pow2"]
    primes = sieve24.primes
    for n, count in golden.items():
        assert int((primes < (1 << int(n))).sum()) == count


def test_ramanujan_examples(small):
    assert ramanujan_sum(6, 2, small) == -1
    assert ramanujan_sum(5, 1, small) == -1
    for q in range(1, 50):
        assert ramanujan_sum(q, 0, small) == totient(q)


def test_ramanujan_closed_form_vs_direct(small):
    for q in range(1, 201):
        for k in range(0, 201):
            assert abs(ramanujan_sum(q, k, small) - direct_ramanujan(q, k)) < 1e-9


@given(st.integers(1, 60), st.integers(1, 60), st.integers(-500, 500))
def test_ramanujan_multiplicative(q1, q2, k):
    if gcd(q1, q2) == 1:
        assert ramanujan_sum(q1 * q2, k) == ramanujan_sum(q1, k) * ramanujan_sum(q2, k)


def test_reduce_fraction():
    assert reduce_fraction(2, 6) == ReducedFraction(1, 3)
    assert reduce_fraction(0, 5) == ReducedFraction(0, 1)
    assert reduce_fraction(7, 4) == ReducedFraction(3, 4)
    assert reduce_fraction(-1, 3) == ReducedFraction(2, 3)
    assert reduce_fraction(7, 4).value == 0.75


@given(st.integers(-10 ** 6, 10 ** 6), st.integers(1, 10 ** 4))
def test_reduce_fraction_properties(a, q):
    r = reduce_fraction(a, q)
    assert 0 <= r.a < r.q and gcd(r.a, r.q) == 1
    assert (a - r.a * (q // r.q)) % q == 0


def test_farey(small):
    assert farey_odd_squarefree(4, small) == [(1, 3), (2, 3)]
    qs = {f.q for f in farey_odd_squarefree(6, small, squarefree=True)}
    assert qs == {3, 5}
    assert 9 not in {f.q for f in farey_odd_squarefree(12, small, squarefree=True)}
    assert len(farey_odd_squarefree(100, small)) == sum(
        totient(q) for q in range(3, 100, 2))


def test_odd_squarefree_below(small):
    assert odd_squarefree_below(20, small) == [1, 3, 5, 7, 11, 13, 15, 17, 19]
