"""Fourier transform of the digit indicator and checks of its size bounds.

``fhat(lam) = 2^-n * sum_{x < 2^n} f(x) e(lam x)`` factors over bits:
each prescribed bit j contributes ``e(lam alpha_j 2^j)`` (times 1/2), each
free bit contributes ``(1 + e(lam 2^j)) / 2``.  All routines below use that
product; direct summation appears only in the tests.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, log2, sqrt

import numpy as np

from ._numeric import GuardError, csum, roots_of_unity
from .numthy import ReducedFraction, is_squarefree

MAX_DYADIC_BITS = 24
MAX_QUADRATURE_BITS = 20
_CHUNK = 1 << 20


@dataclass(frozen=True)
class SpectralPoint:
    lam: float
    value: complex

    @property
    def magnitude(self):
        return abs(self.value)


@dataclass(frozen=True)
class SpectralSamples:
    """Samples of fhat on a grid, stored as arrays; indexing yields points."""
    lambdas: np.ndarray
    values: np.ndarray

    @property
    def magnitudes(self):
        return np.abs(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return SpectralPoint(float(self.lambdas[i]), complex(self.values[i]))


@dataclass
class LemmaReport:
    lemma: int
    n: int
    rho: float
    computed: float
    bound: float
    C: float = None
    params: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)
    c_min: float = None

    @property
    def passed(self):
        return bool(self.computed <= self.bound)

    def to_dict(self):
        return {"lemma": self.lemma, "n": self.n, "rho": self.rho,
                "params": self.params, "computed": self.computed,
                "bound": self.bound, "C": self.C, "pass": self.passed,
                "flags": list(self.flags), "c_min": self.c_min}


_QUARTER = np.array([1, 1j, -1, -1j])


def _phase(x):
    """e(x) for x in [0, 1), exact at multiples of 1/4 (so 1 + e(1/2) == 0)."""
    quad = np.floor(4 * x).astype(np.int64) & 3
    rest = x - quad / 4  # exact: subtracting a nearby quarter
    return _QUARTER[quad] * np.exp(2j * np.pi * rest)


def fhat_many(lams, c):
    """Product-formula fhat at an array of real frequencies."""
    lams = np.mod(np.asarray(lams, dtype=np.float64), 1.0)
    out = np.full(lams.shape, 2.0 ** (-c.size), dtype=np.complex128)
    prescribed = dict(c.pairs())
    for j in range(c.n):
        # lam * 2^j is exact in binary floating point, so is its fraction
        frac = np.mod(lams * float(1 << j), 1.0)
        bit = prescribed.get(j)
        if bit is None:
            out *= (1 + _phase(frac)) / 2
        elif bit:
            out *= _phase(frac)
    return out


def fhat(lam, c):
    """fhat at a single real frequency (reduced mod 1)."""
    if isinstance(lam, (Fraction, ReducedFraction)):
        num, den = (lam.numerator, lam.denominator) if isinstance(lam, Fraction) else lam
        return complex(fhat_rational_many([num], den, c)[0])
    return complex(fhat_many([lam], c)[0])


def fhat_rational_many(numerators, q, c):
    """fhat(a/q) for an array of integers a, with exact residue arithmetic."""
    a = np.mod(np.asarray(numerators, dtype=np.int64), q)
    roots = roots_of_unity(q)
    half = (1 + roots) / 2
    out = np.full(a.shape, 2.0 ** (-c.size), dtype=np.complex128)
    prescribed = dict(c.pairs())
    m = a.copy()
    for j in range(c.n):
        bit = prescribed.get(j)
        if bit is None:
            out *= half[m]
        elif bit:
            out *= roots[m]
        m = (2 * m) % q
    return out


def _dyadic_chunks(c, chunk=_CHUNK):
    """Yield (start, values) blocks of fhat(k / 2^n), k ascending."""
    N = c.N
    roots = roots_of_unity(N)
    half = (1 + roots) / 2
    prescribed = dict(c.pairs())
    for start in range(0, N, chunk):
        k = np.arange(start, min(start + chunk, N), dtype=np.int64)
        vals = np.full(k.shape, 2.0 ** (-c.size), dtype=np.complex128)
        for j in range(c.n):
            bit = prescribed.get(j)
            if bit == 0:
                continue
            idx = (k << j) & (N - 1)
            vals *= half[idx] if bit is None else roots[idx]
        yield start, vals


def fhat_all_dyadic(c):
    """All 2^n samples fhat(k / 2^n)."""
    if c.n > MAX_DYADIC_BITS:
        raise GuardError(f"n={c.n} exceeds dyadic cap {MAX_DYADIC_BITS}")
    values = np.concatenate([v for _, v in _dyadic_chunks(c)])
    return SpectralSamples(np.arange(c.N) / c.N, values)


def dyadic_abs_sum(c):
    """sum_k |fhat(k / 2^n)|, correctly rounded, streamed in blocks."""
    if c.n > MAX_DYADIC_BITS:
        raise GuardError(f"n={c.n} exceeds dyadic cap {MAX_DYADIC_BITS}")
    return csum([csum(np.abs(v)) for _, v in _dyadic_chunks(c)])


def _entropy_rate(c):
    rho = c.rho
    return rho * log2(1 / rho) if 0 < rho < 1 else 0.0


def _flags(c):
    return ["vacuous: rho >= 1/2"] if c.rho >= 0.5 else []


def _c_min(log_value, scale):
    if scale <= 0 or log_value == float("-inf"):
        return None
    return log_value / scale


def lemma1_check(c, C=4.0):
    """Total dyadic spectral mass 2^{r+1} sum_k |fhat(k/2^n)| vs 2^{C rho log(1/rho) n}."""
    computed = 2.0 ** c.size * dyadic_abs_sum(c)
    h = _entropy_rate(c)
    return LemmaReport(
        lemma=1, n=c.n, rho=c.rho, computed=computed,
        bound=2.0 ** (C * h * c.n), C=C, flags=_flags(c),
        c_min=_c_min(log2(computed), h * c.n))


def l1_norm_quadrature(c, gridsize):
    """Uniform-grid (periodic trapezoid) estimate of the integral of |fhat| over [0, 1)."""
    parts = []
    for start in range(0, gridsize, _CHUNK):
        g = np.arange(start, min(start + _CHUNK, gridsize), dtype=np.int64)
        parts.append(csum(np.abs(fhat_rational_many(g, gridsize, c))))
    return csum(parts) / gridsize


def lemma2_check(c, C=4.0, gridsize=None):
    """2^r times the integral of |fhat| over [0, 1) vs 2^{C rho log(1/rho) n - n}."""
    if c.n > MAX_QUADRATURE_BITS:
        raise GuardError(f"n={c.n} exceeds quadrature cap {MAX_QUADRATURE_BITS}")
    minimum = 1 << (c.n + 2)
    # the integrand has kinks, so error is O(h^2); 2^(n+3) keeps a doubling under 1%
    gridsize = 1 << (c.n + 3) if gridsize is None else int(gridsize)
    if gridsize < minimum:
        raise ValueError(f"gridsize {gridsize} undersamples; need >= {minimum}")
    integral = l1_norm_quadrature(c, gridsize)
    computed = 2.0 ** c.r * integral
    h = _entropy_rate(c)
    return LemmaReport(
        lemma=2, n=c.n, rho=c.rho, computed=computed,
        bound=2.0 ** (C * h * c.n - c.n), C=C,
        params={"gridsize": gridsize, "integral": integral}, flags=_flags(c),
        c_min=_c_min(log2(computed) + c.n, h * c.n) if computed > 0 else None)


def odd_rational_abs_sum(c, Q):
    """sum over odd 1 < q < Q and units a mod q of |fhat(a/q)|."""
    parts = []
    for q in range(3, Q, 2):
        a = np.array([a for a in range(1, q) if gcd(a, q) == 1], dtype=np.int64)
        parts.append(csum(np.abs(fhat_rational_many(a, q, c))))
    return csum(parts)


def lemma3_check(c, Q, C=4.0, t=None):
    """2^r sum_{q<Q odd, (a,q)=1} |fhat(a/q)| vs Q^{C rho log(1/rho)}."""
    Q = int(Q)
    if Q > max(2.0 ** (c.n / 4), 2):
        raise GuardError(f"Q={Q} exceeds 2^(n/4) for n={c.n}")
    computed = 2.0 ** c.r * odd_rational_abs_sum(c, Q)
    h = _entropy_rate(c)
    flags = _flags(c)
    if Q >= 2.0 ** (c.n / 100):
        flags.append("out of regime: Q >= 2^(n/100)")
    c_min = None
    if computed > 0 and Q > 1:
        c_min = _c_min(log2(computed), h * log2(Q))
    return LemmaReport(
        lemma=3, n=c.n, rho=c.rho, computed=computed,
        bound=float(Q) ** (C * h), C=C, params={"Q": Q}, flags=flags,
        c_min=c_min)


def lemma4_check(c, q, a):
    """Single odd rational: 2^r |fhat(a/q)| vs 2^{-sqrt n}."""
    if q <= 1 or q % 2 == 0:
        raise ValueError(f"q={q} must be odd and > 1")
    if gcd(a, q) != 1:
        raise ValueError(f"a={a} is not coprime to q={q}")
    computed = 2.0 ** c.r * float(abs(fhat_rational_many([a], q, c)[0]))
    flags = _flags(c)
    if q >= c.n ** (1 / (10 * c.rho)):
        flags.append("out of regime: q >= n^(1/(10 rho))")
    return LemmaReport(
        lemma=4, n=c.n, rho=c.rho, computed=computed,
        bound=2.0 ** (-sqrt(c.n)), params={"q": q, "a": a}, flags=flags)


def kappa_bound(c, q, t=None, normalization=None):
    """Fourier bound for kappa(q): (2^|A| / q) sum_{a=1}^{q-1} |fhat(a/q)|.

    Expanding [q | k] in additive characters gives
    |sum_{q|k} f(k) - E[f] N/q| <= (N/q) sum_{a>0} |fhat(a/q)|, and dividing by
    N E[f] = N 2^-|A| yields the factor 2^|A| = 2^{r+1}.  ``normalization``
    overrides that power of two (e.g. 2^r for the half-size variant).
    """
    if q < 1 or q % 2 == 0:
        raise ValueError(f"q={q} must be a positive odd integer")
    if q == 1:
        return 0.0
    scale = 2.0 ** c.size if normalization is None else normalization
    vals = fhat_rational_many(np.arange(1, q), q, c)
    return scale / q * csum(np.abs(vals))


def kappa_sum(c, B, t=None):
    """Sum of kappa_bound over odd squarefree q < B."""
    return csum([kappa_bound(c, q) for q in range(1, B, 2) if is_squarefree(q, t)])


def exp_sum_lambda(alpha, x, t):
    """S(alpha) = sum_{k <= x} Lambda(k) e(k alpha).

    Rational ``alpha`` (Fraction or ReducedFraction) uses exact residues.
    """
    t._check(x)
    ks, logs = t.prime_power_support
    cut = np.searchsorted(ks, x, side="right")
    ks, logs = ks[:cut], logs[:cut]
    if isinstance(alpha, (Fraction, ReducedFraction)):
        a, q = (alpha.numerator, alpha.denominator) if isinstance(alpha, Fraction) else alpha
        phases = roots_of_unity(q)[(ks % q) * (a % q) % q]
    else:
        phases = _phase(np.mod(ks * float(alpha), 1.0))
    return csum(logs * phases)
