"""Dirichlet characters, Gauss sums and character-twisted sums.

A character mod q is stored by its exponents on fixed generators of the unit
group: one cyclic factor per odd prime power (generated by a primitive root
that stays primitive for every power of p), and for 2^e the factors
<-1> (e >= 2) and <5> (e >= 3).  Values are looked up in a single table of
roots of unity whose order is the group exponent.
"""
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product
from math import gcd, lcm

import numpy as np

from ._numeric import GuardError, csum, roots_of_unity, valuation
from .bitconstraint import enumerate_constrained, restrict_low_bits
from .numthy import factorize, mobius, totient, ramanujan_sum
from .spectra import fhat_rational_many

MAX_MODULUS = 10_000


@lru_cache(maxsize=None)
def primitive_root(p):
    """Smallest g that generates (Z/p^kZ)* for every k >= 1 (p odd)."""
    cofactors = [(p - 1) // ell for ell in factorize(p - 1)]
    g = 2
    while any(pow(g, m, p) == 1 for m in cofactors):
        g += 1
    if pow(g, p - 1, p * p) == 1:
        g += p
    return g


@dataclass(frozen=True, eq=False)
class _Factor:
    p: int
    e: int
    order: int
    ind: np.ndarray  # discrete log per residue mod p^e, -1 off the units


def _prime_power_factors(p, e):
    pe = p ** e
    if p != 2:
        phi = pe - pe // p
        ind = np.full(pe, -1, dtype=np.int64)
        g, x = primitive_root(p), 1
        for i in range(phi):
            ind[x] = i
            x = x * g % pe
        return [_Factor(p, e, phi, ind)]
    if e == 1:
        return []
    sign = np.full(pe, -1, dtype=np.int64)
    if e == 2:
        sign[1], sign[3] = 0, 1
        return [_Factor(2, 2, 2, sign)]
    five = np.full(pe, -1, dtype=np.int64)
    x = 1
    for v in range(pe // 4):
        sign[x], five[x] = 0, v
        sign[pe - x], five[pe - x] = 1, v
        x = x * 5 % pe
    return [_Factor(2, e, 2, sign), _Factor(2, e, pe // 4, five)]


@dataclass(frozen=True, eq=False)
class UnitGroup:
    q: int
    factors: tuple
    exponent: int
    logs: np.ndarray  # shape (len(factors), q)
    units: np.ndarray  # bool mask of residues coprime to q

    @property
    def orders(self):
        return tuple(f.order for f in self.factors)


@lru_cache(maxsize=512)
def unit_group(q):
    if q < 1:
        raise ValueError("modulus must be positive")
    factors = []
    for p, e in sorted(factorize(q).items()):
        factors.extend(_prime_power_factors(p, e))
    residues = np.arange(q, dtype=np.int64)
    logs = np.array([f.ind[residues % (f.p ** f.e)] for f in factors],
                    dtype=np.int64).reshape(len(factors), q)
    units = np.gcd(residues, q) == 1
    exponent = lcm(*[f.order for f in factors]) if factors else 1
    return UnitGroup(q, tuple(factors), exponent, logs, units)


@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    modulus: int
    exponents: tuple
    group: UnitGroup = field(repr=False)

    @classmethod
    def from_exponents(cls, q, exponents):
        grp = unit_group(q)
        if len(exponents) != len(grp.factors):
            raise ValueError(f"mod {q} needs {len(grp.factors)} exponents")
        exps = tuple(int(x) % o for x, o in zip(exponents, grp.orders))
        return cls(q, exps, grp)

    @cached_property
    def phase(self):
        """Exponent of e(1/L) per residue (L = group exponent), -1 off units."""
        grp = self.group
        acc = np.zeros(self.modulus, dtype=np.int64)
        for x, f, row in zip(self.exponents, grp.factors, grp.logs):
            acc += x * (grp.exponent // f.order) * row
        acc %= grp.exponent
        acc[~grp.units] = -1
        return acc

    @cached_property
    def values(self):
        vals = roots_of_unity(self.group.exponent)[np.maximum(self.phase, 0)]
        vals = np.where(self.group.units, vals, 0)
        vals.setflags(write=False)
        return vals

    def __call__(self, a):
        return complex(self.values[a % self.modulus])

    def conj(self):
        return DirichletCharacter.from_exponents(
            self.modulus, [-x for x in self.exponents])

    @property
    def is_principal(self):
        return not any(self.exponents)

    @cached_property
    def _induced(self):
        return _primitive_data(self)

    @property
    def conductor(self):
        return self._induced[0]

    @property
    def primitive(self):
        return self.conductor == self.modulus

    def to_dict(self):
        return {"q": self.modulus, "conductor": self.conductor,
                "exponent_vector": list(self.exponents),
                "primitive": self.primitive}

    def __repr__(self):
        return f"DirichletCharacter(q={self.modulus}, exponents={self.exponents})"


def _primitive_data(chi):
    """Conductor and exponents of the inducing primitive character."""
    q1, exps = 1, []
    it = iter(zip(chi.group.factors, chi.exponents))
    for f, x in it:
        if f.p != 2:
            if x == 0:
                continue
            v = valuation(x, f.p)
            k = f.e - v
            q1 *= f.p ** k
            exps.append(x // f.p ** v)
        elif f.e == 2:
            if x:
                q1 *= 4
                exps.append(x)
        else:
            s = x
            _, t = next(it)
            if t == 0:
                if s:
                    q1 *= 4
                    exps.append(s)
            else:
                v = valuation(t, 2)
                q1 *= 2 ** (f.e - v)
                exps.extend([s, t >> v])
    return q1, tuple(exps)


def character_group(q, t=None):
    """All phi(q) characters mod q, in lexicographic exponent order."""
    if q > MAX_MODULUS:
        raise GuardError(f"modulus {q} exceeds {MAX_MODULUS}")
    grp = unit_group(q)
    return [DirichletCharacter(q, exps, grp)
            for exps in product(*[range(o) for o in grp.orders])]


def conductor_and_primitive(chi):
    """(q1, chi1): the conductor and the primitive character inducing chi."""
    q1, exps = chi._induced
    if q1 == chi.modulus:
        return q1, chi
    return q1, DirichletCharacter.from_exponents(q1, exps)


def gauss_sum(chi):
    """tau(chi) = sum_{m=1}^{q} chi(m) e(m/q)."""
    return complex(np.dot(chi.values, roots_of_unity(chi.modulus)))


def twist_sum(chi, k):
    """sum_{a=1}^{q} chi(a) e(ak/q)."""
    q = chi.modulus
    a = np.arange(q, dtype=np.int64)
    return complex(np.dot(chi.values, roots_of_unity(q)[(a * (k % q)) % q]))


@dataclass
class TwistReport:
    identity: str
    discrepancy: float
    params: dict = field(default_factory=dict)

    def to_dict(self):
        return {"identity": self.identity, "discrepancy": self.discrepancy,
                "params": self.params}


def verify_gauss_factorization(chi):
    """tau(conj chi) against mu(q2) conj(chi1)(q2) tau(conj chi1), q2 = q/q1."""
    q = chi.modulus
    q1, chi1 = conductor_and_primitive(chi)
    q2 = q // q1
    lhs = gauss_sum(chi.conj())
    rhs = mobius(q2) * chi1.conj()(q2) * gauss_sum(chi1.conj())
    vanishing = mobius(q2) == 0 or gcd(q1, q2) != 1
    return TwistReport("gauss_factorization", abs(lhs - rhs), {
        "q": q, "q1": q1, "q2": q2, "vanishing": vanishing, "lhs_abs": abs(lhs)})


def reduced_twist_sum(chi, k):
    """Closed form of sum_a chi(a) e(ak/q) valid for every chi and k.

    With g = gcd(k, q), q' = q/g, k' = k/g and chi induced by chi* mod d,
    the sum vanishes unless d | q', and otherwise equals
    phi(q)/phi(q') * conj(chi*)(k') * mu(q'/d) * chi*(q'/d) * tau(chi*).
    """
    q = chi.modulus
    d, chi_star = conductor_and_primitive(chi)
    g = gcd(k, q)
    qp, kp = q // g, k // g
    if qp % d:
        return 0j
    m = qp // d
    return (totient(q) / totient(qp) * chi_star.conj()(kp) * mobius(m)
            * chi_star(m) * gauss_sum(chi_star))


def verify_twist_identity(chi, k):
    """Check the factorisation of sum_a e(ak/q) chi(a) through chi1 and c_{q2}.

    For gcd(q1, q2) = 1 the sum must equal conj(chi1)(k) tau(chi1) c_{q2}(k)
    chi1(q2); with q2 also squarefree the normalised coefficient
    tau(conj chi)/phi(q) * sum_a chi(a) e(-ak/q) is checked as well.
    Otherwise the sum must vanish for k coprime to q and match
    ``reduced_twist_sum`` for the remaining k.
    """
    q = chi.modulus
    q1, chi1 = conductor_and_primitive(chi)
    q2 = q // q1
    lhs = twist_sum(chi, k)
    params = {"q": q, "q1": q1, "q2": q2, "k": k}
    if gcd(q1, q2) == 1:
        rhs = chi1.conj()(k) * gauss_sum(chi1) * ramanujan_sum(q2, k) * chi1(q2)
        disc = abs(lhs - rhs)
        params["case"] = "coprime"
        if mobius(q2) != 0:
            d = gcd(q2, k)
            combined = gauss_sum(chi.conj()) / totient(q) * twist_sum(chi, -k)
            expect = (q1 / totient(q1) * mobius(d) / totient(q2 // d)
                      * chi1.conj()(k))
            params["combined_discrepancy"] = abs(combined - expect)
            disc = max(disc, params["combined_discrepancy"])
        return TwistReport("twist", disc, params)
    if gcd(k, q) == 1:
        params["case"] = "vanishing"
        return TwistReport("twist", abs(lhs), params)
    params["case"] = "reduction"
    return TwistReport("twist", abs(lhs - reduced_twist_sum(chi, k)), params)


def psi_chi(x, chi, t):
    """psi(x, chi) = sum_{k <= x} Lambda(k) chi(k)."""
    t._check(x)
    ks, logs = t.prime_power_support
    cut = np.searchsorted(ks, x, side="right")
    return csum(logs[:cut] * chi.values[ks[:cut] % chi.modulus])


def interval_twisted_lambda_max(chi, N, pieces, t):
    """Largest |sum_{k in I} chi(k) Lambda(k)| over `pieces` equal blocks of [1, N]."""
    if pieces < 1:
        raise ValueError("pieces must be >= 1")
    lam = t.lambda_dense(N)[1:]
    weights = lam * chi.values[np.arange(1, N + 1) % chi.modulus]
    return max(abs(csum(block)) for block in np.array_split(weights, pieces))


def twisted_digit_sum(c, chi1, q0, b, t=None):
    """sum_{k < N, q0 | k + b} f(k) chi1(k + b), by enumeration."""
    if gcd(q0, chi1.modulus) != 1:
        raise ValueError(f"q0={q0} and modulus {chi1.modulus} are not coprime")
    xs = enumerate_constrained(c) + b
    xs = xs[xs % q0 == 0]
    return csum(chi1.values[xs % chi1.modulus])


def character_fourier(chi):
    """chi^(a) = (1/q) sum_x chi(x) e(-xa/q) for a = 0..q-1."""
    q = chi.modulus
    x = np.arange(q, dtype=np.int64)
    kernel = roots_of_unity(q)[(-np.outer(x, x)) % q]
    return chi.values @ kernel / q


def _fourier_grid(chi1, q0):
    q1 = chi1.modulus
    a1 = np.arange(q1, dtype=np.int64)
    if chi1.primitive:
        # chi^ vanishes off the units for primitive characters
        a1 = a1[np.gcd(a1, q1) == 1]
    a0 = np.arange(q0, dtype=np.int64)
    A0, A1 = np.meshgrid(a0, a1, indexing="ij")
    return A0.ravel(), A1.ravel()


def twisted_digit_sum_fourier(c, chi1, q0, b, t=None):
    """The same twisted sum evaluated on the Fourier side.

    (N/q0) sum_{a0 < q0} sum_{a1} chi^(a1) e(b lam) fhat(lam) with
    lam = a0/q0 + a1/q1; a1 runs over units mod q1 when chi1 is primitive
    and over all residues otherwise.
    """
    q1 = chi1.modulus
    if q1 % 2 == 0:
        raise ValueError(f"modulus {q1} is even; use the even split")
    Q = q0 * q1
    A0, A1 = _fourier_grid(chi1, q0)
    num = (A0 * q1 + A1 * q0) % Q
    terms = (character_fourier(chi1)[A1] * roots_of_unity(Q)[(b % Q) * num % Q]
             * fhat_rational_many(num, Q, c))
    return c.N / q0 * csum(terms)


def twisted_fourier_bound(c, chi1, q0):
    """N / (q0 sqrt(q1)) * sum |fhat(a0/q0 + a1/q1)| over the Fourier grid."""
    q1 = chi1.modulus
    Q = q0 * q1
    A0, A1 = _fourier_grid(chi1, q0)
    num = (A0 * q1 + A1 * q0) % Q
    return c.N / (q0 * np.sqrt(q1)) * csum(np.abs(fhat_rational_many(num, Q, c)))


def split_two_part(chi):
    """chi = chi0 * chi1' with chi0 mod 2^nu and chi1' mod the odd part."""
    q = chi.modulus
    nu = valuation(q, 2)
    n2 = sum(1 for f in chi.group.factors if f.p == 2)
    chi0 = DirichletCharacter.from_exponents(2 ** nu, chi.exponents[:n2])
    rest = DirichletCharacter.from_exponents(q >> nu, chi.exponents[n2:])
    return nu, chi0, rest


def twisted_digit_sum_even_split(c, chi1, q0, b, t=None):
    """Twisted sum for an even modulus 2^nu q1' via k = z + 2^nu x.

    Each z contributes chi0(b + z) times an odd-modulus twisted sum over the
    restricted indicator x -> f(z + 2^nu x), shifted so that it has the form
    sum_x [q0 | x + b'] chi1'(x + b') f_z(x); that inner sum is evaluated on
    the Fourier side.
    """
    nu, chi0, chi_odd = split_two_part(chi1)
    q_odd = chi_odd.modulus
    if nu == 0:
        raise ValueError("modulus is odd; use twisted_digit_sum_fourier")
    if q_odd == 1:
        raise ValueError("modulus is a pure power of 2")
    if q0 % 2 == 0:
        raise ValueError(f"q0={q0} must be odd")
    if c.n - nu < 1:
        raise ValueError(f"n={c.n} too small for nu={nu}")
    M = q0 * q_odd
    inv = pow(1 << nu, -1, M)
    scale = chi_odd(1 << nu)
    total = []
    for z in range(1 << nu):
        weight = chi0(b + z)
        fz = restrict_low_bits(c, nu, z)
        if weight == 0 or fz is None:
            continue
        shift = (b + z) * inv % M
        total.append(weight * scale * twisted_digit_sum_fourier(fz, chi_odd, q0, shift))
    return csum(total) if total else 0j
