"""Sieve tables (spf, von Mangoldt, Moebius, totient) and small arithmetic."""
import csv
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd, isqrt
from typing import NamedTuple

import numpy as np

from ._numeric import GuardError, csum

MAX_SIEVE = 1 << 30


@dataclass(eq=False)
class SieveTables:
    """Per-integer tables for 0..limit.

    ``lam_p[k]`` is the prime p when k = p^m (m >= 1) and 0 otherwise, so
    Lambda(k) = log(lam_p[k]) is only evaluated in floating point on demand.
    """
    limit: int
    spf: np.ndarray
    lam_p: np.ndarray
    mu: np.ndarray
    phi: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False)

    def von_mangoldt(self, k):
        p = int(self.lam_p[k])
        return float(np.log(p)) if p else 0.0

    @cached_property
    def prime_power_support(self):
        """(ks, log p) for all prime powers k <= limit, ascending."""
        ks = np.flatnonzero(self.lam_p).astype(np.int64)
        return ks, np.log(self.lam_p[ks].astype(np.float64))

    @cached_property
    def primes(self):
        ks = np.arange(self.limit + 1, dtype=np.int64)
        return ks[(self.spf == ks) & (ks >= 2)]

    def lambda_dense(self, upto):
        """Lambda(k) for k = 0..upto as a float array."""
        self._check(upto)
        p = self.lam_p[: upto + 1]
        out = np.zeros(upto + 1)
        nz = p > 0
        out[nz] = np.log(p[nz].astype(np.float64))
        return out

    def _check(self, x):
        if x > self.limit:
            raise ValueError(f"{x} exceeds sieve limit {self.limit}")


def build_sieve(limit):
    """Smallest-prime-factor sieve with derived Lambda, mu and phi tables."""
    limit = int(limit)
    if limit < 0:
        raise ValueError("sieve limit must be non-negative")
    if limit > MAX_SIEVE:
        raise GuardError(f"sieve limit {limit} exceeds {MAX_SIEVE}")
    limit = max(limit, 2)
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in range(2, isqrt(limit) + 1):
        if spf[p] == 0:
            seg = spf[p * p :: p]
            seg[seg == 0] = p
    ks = np.arange(limit + 1, dtype=np.int32)
    unset = spf == 0
    spf[unset] = ks[unset]
    spf[0], spf[1] = 0, 1

    cof = np.ones(limit + 1, dtype=np.int32)
    cof[2:] = ks[2:] // spf[2:]
    # Omega(k) by fixed-point iteration: depth grows by one per pass
    omega = np.zeros(limit + 1, dtype=np.int8)
    for _ in range(limit.bit_length()):
        nxt = omega[cof] + 1
        nxt[:2] = 0
        if np.array_equal(nxt, omega):
            break
        omega = nxt

    mu = np.zeros(limit + 1, dtype=np.int8)
    phi = np.zeros(limit + 1, dtype=np.int32)
    lam_p = np.zeros(limit + 1, dtype=np.int32)
    mu[1], phi[1] = 1, 1
    for level in range(1, int(omega.max()) + 1):
        idx = np.flatnonzero(omega == level)
        p, c = spf[idx], cof[idx]
        repeated = (c % p) == 0
        mu[idx] = np.where(repeated, 0, -mu[c])
        phi[idx] = phi[c] * np.where(repeated, p, p - 1)
        lam_p[idx] = np.where((c == 1) | (repeated & (lam_p[c] == p)), p, 0)
    return SieveTables(limit, spf, lam_p, mu, phi)


def chebyshev_psi(x, t):
    """psi(x) = sum of Lambda(k) for k <= x, correctly rounded."""
    t._check(x)
    ks, logs = t.prime_power_support
    return csum(logs[: np.searchsorted(ks, x, side="right")])


def factorize(n):
    """Prime factorisation of n >= 1 as {p: e} (trial division)."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def mobius(n, t=None):
    if t is not None and n <= t.limit:
        return int(t.mu[n])
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def totient(n, t=None):
    if t is not None and n <= t.limit:
        return int(t.phi[n])
    out = n
    for p in factorize(n):
        out -= out // p
    return out


def is_squarefree(n, t=None):
    return mobius(n, t) != 0


def ramanujan_sum(q, k, t=None):
    """c_q(k) from the closed form mu(q/d) phi(q) / phi(q/d), d = gcd(q, k)."""
    if q < 1:
        raise ValueError("q must be positive")
    m = q // gcd(q, k)
    return mobius(m, t) * (totient(q, t) // totient(m, t))


class ReducedFraction(NamedTuple):
    """a/q in lowest terms with 0 <= a < q, read as a point of R/Z."""
    a: int
    q: int

    @property
    def value(self):
        return self.a / self.q

    def __str__(self):
        return f"{self.a}/{self.q}"


def reduce_fraction(a, q):
    if q == 0:
        raise ZeroDivisionError("denominator must be nonzero")
    if q < 0:
        a, q = -a, -q
    a %= q
    g = gcd(a, q)
    return ReducedFraction(a // g, q // g)


def farey_odd_squarefree(Q, t=None, squarefree=False):
    """Fractions a/q with q < Q odd, 1 <= a < q, gcd(a, q) = 1, by (q, a)."""
    out = []
    for q in range(3, Q, 2):
        if squarefree and not is_squarefree(q, t):
            continue
        out.extend(ReducedFraction(a, q) for a in range(1, q) if gcd(a, q) == 1)
    return out


def odd_squarefree_below(B, t=None):
    """Odd squarefree q with 1 <= q < B."""
    return [q for q in range(1, B, 2) if is_squarefree(q, t)]


def write_tables_csv(t, path, upto):
    """Golden table rows ``k,lambda_p,mu,phi`` for 1 <= k <= upto."""
    t._check(upto)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k", "lambda_p", "mu", "phi"])
        for k in range(1, upto + 1):
            w.writerow([k, int(t.lam_p[k]), int(t.mu[k]), int(t.phi[k])])


def read_tables_csv(path):
    with open(path, newline="") as fh:
        return [{key: int(v) for key, v in row.items()} for row in csv.DictReader(fh)]
