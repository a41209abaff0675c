"""Major/minor arcs, the principal main term and end-to-end prime counts."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict
from fractions import Fraction
from math import ceil, gcd, log, log2, sqrt
import statistics

import numpy as np

from ._numeric import GuardError, csum
from .bitconstraint import expectation, f_mask, residue_counts
from .numthy import ReducedFraction, is_squarefree, odd_squarefree_below, totient
from .spectra import exp_sum_lambda, fhat_all_dyadic, kappa_bound

MAX_PIPELINE_BITS = 24


@dataclass
class BChoice:
    B: int
    log2_B: int
    lower: float  # admissible window: lower < log2 B < upper
    upper: float
    flags: list = field(default_factory=list)

    @property
    def in_window(self):
        return self.lower < self.log2_B < self.upper


def b_window(n, rho, C):
    """(lower, upper) bounds on log2 B: 3 C rho log2(1/rho) n and n / 1000."""
    h = rho * log2(1 / rho) if 0 < rho < 1 else 0.0
    return 3 * C * h * n, n / 1000


def choose_B(c, C=4.0):
    return choose_B_params(c.n, c.rho, C)


def choose_B_params(n, rho, C=4.0):
    """Power of two just above the minor-arc threshold, clamped to [4, 2^(n/4)].

    When the window is empty the midpoint exponent (geometric mean of the two
    bounds on B) is used instead; both situations are flagged.
    """
    lower, upper = b_window(n, rho, C)
    flags = []
    if lower < upper:
        exp2 = ceil(lower) + 1
    else:
        flags.append("empty window")
        exp2 = ceil((lower + upper) / 2)
    hi = max(2, int(n // 4))
    clamped = min(max(exp2, 2), hi)
    if clamped != exp2:
        flags.append(f"clamped 2^{exp2} -> 2^{clamped}")
    choice = BChoice(1 << clamped, clamped, lower, upper, flags)
    if not choice.in_window and "empty window" not in flags:
        flags.append("outside window")
    return choice


@dataclass(frozen=True)
class MajorArc:
    center: ReducedFraction
    half_width: float


@dataclass
class ArcDecomposition:
    N: int
    B: int
    arcs: list
    disjoint: bool

    @property
    def measure(self):
        """Total length of the major arcs (each arc counted in full)."""
        return csum([2 * arc.half_width for arc in self.arcs])

    def contains(self, alpha):
        """Major arc containing alpha (mod 1), or None when alpha is minor."""
        alpha %= 1.0
        for arc in self.arcs:
            d = abs(alpha - arc.center.value)
            if min(d, 1 - d) < arc.half_width:
                return arc
        return None


def decompose_arcs(N, B):
    """Arcs |alpha - a/q| < B/(qN) for q < B, gcd(a, q) = 1."""
    if B < 2:
        raise ValueError("B must be >= 2")
    arcs = [MajorArc(ReducedFraction(a, q), B / (q * N))
            for q in range(1, B) for a in range(q) if gcd(a, q) == 1]
    ordered = sorted(arcs, key=lambda arc: arc.center.value)
    disjoint = True
    for left, right in zip(ordered, ordered[1:] + ordered[:1]):
        gap = (right.center.value - left.center.value) % 1.0
        if len(ordered) > 1 and gap < left.half_width + right.half_width:
            disjoint = False
            break
    if len(ordered) == 1:
        disjoint = 2 * ordered[0].half_width < 1
    if B ** 3 <= N and not disjoint:
        raise AssertionError("major arcs overlap although B <= N^(1/3)")
    return ArcDecomposition(N, B, arcs, disjoint)


def major_arc_measure_formula(N, B):
    return sum(totient(q) * 2 * B / (q * N) for q in range(1, B))


def vinogradov_bound(q, N):
    return (sqrt(q * N) + N / sqrt(q) + N ** 0.8) * log(N) ** 3


def vinogradov_diagnostic(N, B, samples=100, t=None, seed=0, workers=1, alphas=None):
    """|S(alpha)| against the Vinogradov bound at seeded random alpha.

    Each alpha is paired with its continued-fraction approximation a/q,
    q < N/B.  Returns a dict with per-sample rows and summary ratios.
    """
    t._check(N)
    if alphas is None:
        alphas = np.random.default_rng(seed).random(samples)
    qmax = max(1, N // B - 1)

    def row(alpha):
        approx = Fraction(float(alpha)).limit_denominator(qmax)
        s = abs(exp_sum_lambda(float(alpha), N, t))
        bound = vinogradov_bound(approx.denominator, N)
        return {"alpha": float(alpha), "a": approx.numerator % approx.denominator,
                "q": approx.denominator, "abs_S": s, "bound": bound,
                "ratio": s / bound}

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        rows = list(pool.map(row, alphas))
    ratios = [r["ratio"] for r in rows]
    return {"N": N, "B": B, "seed": seed, "samples": len(rows), "rows": rows,
            "max_ratio": max(ratios), "median_ratio": statistics.median(ratios),
            "all_below": all(r <= 1 for r in ratios)}


@dataclass
class AssumptionACheck:
    q0: int
    count: int
    expected: float
    actual: float
    kappa: float
    allowance: float

    @property
    def passed(self):
        return self.actual <= self.allowance


def assumption_a_check(c, q0, t=None):
    """Deviation of #{k < N : q0 | k, f(k) = 1} from E[f] N / q0 vs kappa."""
    if q0 % 2 == 0:
        raise ValueError(f"q0={q0} must be odd")
    if not is_squarefree(q0):
        raise ValueError(f"q0={q0} must be squarefree")
    count = _count_multiples(c, q0)
    expected = expectation(c) * c.N / q0
    kappa = kappa_bound(c, q0)
    return AssumptionACheck(q0, count, expected, abs(count - expected), kappa,
                            kappa * c.N * expectation(c) + 1)


def _count_multiples(c, q0):
    return int(residue_counts(c, q0)[0])


def constrained_lambda_sum(c, t):
    """sum_{k < N} Lambda(k) f(k), correctly rounded."""
    t._check(c.N - 1)
    ks, logs = t.prime_power_support
    cut = np.searchsorted(ks, c.N - 1, side="right")
    sel = f_mask(ks[:cut], c)
    return csum(logs[:cut][sel])


def dyadic_parseval_sum(c, t):
    """(1/N) sum_j S(j/N) conj(S_f(j/N)) over the 2^n-point grid.

    S is sampled with an FFT of Lambda on [0, N); S_f = N fhat comes from
    the product formula.
    """
    N = c.N
    lam = t.lambda_dense(N - 1)
    S = np.fft.ifft(lam) * N
    Sf = N * fhat_all_dyadic(c).values
    return csum(S * np.conj(Sf)) / N


@dataclass
class PipelineReport:
    n: int
    r: int
    A: str
    B: int
    direct: float
    main: float
    kappa_sum: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def residual(self):
        return self.direct - self.main

    @property
    def rel_residual(self):
        return self.residual / self.main

    def to_dict(self):
        d = asdict(self)
        d["residual"] = self.residual
        d["rel_residual"] = self.rel_residual
        return d


def main_term_pipeline(c, t, C=4.0, B=None):
    if c.n > MAX_PIPELINE_BITS:
        raise GuardError(f"n={c.n} exceeds pipeline cap {MAX_PIPELINE_BITS}")
    choice = choose_B(c, C)
    B = choice.B if B is None else B
    direct = constrained_lambda_sum(c, t)
    main = 2 * expectation(c) * c.N
    ks = odd_squarefree_below(B, t)
    kappa = csum([kappa_bound(c, q) for q in ks])
    diagnostics = {"B_flags": choice.flags, "B_window": [choice.lower, choice.upper],
                   "C": C,
                   "arc_measure": major_arc_measure_formula(c.N, B)}
    return PipelineReport(c.n, c.r, c.to_text(), B, direct, main, kappa, diagnostics)


@dataclass
class TheoremCheck:
    n: int
    r: int
    exact_count: int
    asymptotic: float

    @property
    def ratio(self):
        return self.exact_count / self.asymptotic

    def to_dict(self):
        d = asdict(self)
        d["ratio"] = self.ratio
        return d


def theorem_check(c, t):
    """Exact count of primes p < 2^n with the prescribed digits vs 2^-r N / ln N."""
    if c.n > MAX_PIPELINE_BITS:
        raise GuardError(f"n={c.n} exceeds pipeline cap {MAX_PIPELINE_BITS}")
    t._check(c.N - 1)
    primes = t.primes[: np.searchsorted(t.primes, c.N)]
    count = int(np.count_nonzero(f_mask(primes, c)))
    return TheoremCheck(c.n, c.r, count, 2.0 ** (-c.r) * c.N / log(c.N))
