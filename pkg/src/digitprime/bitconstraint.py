"""Binary digit constraints and their indicator function.

A constraint fixes the bits of ``x < 2**n`` at a set of positions ``A``.
By default position 0 is forced to 1 so that only odd integers qualify;
``|A| = r + 1`` and ``rho = |A| / n``.
"""
from dataclasses import dataclass
import re

import numpy as np

from ._numeric import GuardError

MAX_BITS = 30
MAX_ENUM_FREE_BITS = 26


@dataclass(frozen=True)
class DigitConstraint:
    n: int
    positions: tuple
    assignments: tuple

    @property
    def size(self):
        """Number of constrained positions, |A|."""
        return len(self.positions)

    @property
    def r(self):
        return self.size - 1

    @property
    def rho(self):
        return self.size / self.n

    @property
    def N(self):
        return 1 << self.n

    @property
    def mask(self):
        m = 0
        for j in self.positions:
            m |= 1 << j
        return m

    @property
    def pattern(self):
        v = 0
        for j, a in zip(self.positions, self.assignments):
            v |= a << j
        return v

    @property
    def free_positions(self):
        fixed = set(self.positions)
        return tuple(j for j in range(self.n) if j not in fixed)

    def pairs(self):
        return list(zip(self.positions, self.assignments))

    def to_text(self):
        body = ",".join(f"{j}:{a}" for j, a in self.pairs())
        return f"n={self.n};A={body}"

    def to_dict(self):
        return {"n": self.n, "positions": list(self.positions),
                "assignments": list(self.assignments)}

    def __str__(self):
        return self.to_text()


def make_constraint(n, positions, assignments, *, odd=True):
    """Build a validated constraint.

    With ``odd=True`` (the default) position 0 is inserted with value 1 when
    missing, and an explicit 0 there is rejected.  ``odd=False`` yields a
    plain digit indicator, used for sub-blocks such as ``x -> f(z + 2**nu x)``.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_BITS:
        raise GuardError(f"n={n} exceeds the desk-scale cap {MAX_BITS}")
    positions = [int(j) for j in positions]
    assignments = [int(a) for a in assignments]
    if len(positions) != len(assignments):
        raise ValueError("positions and assignments differ in length")
    if len(set(positions)) != len(positions):
        raise ValueError(f"duplicate positions in {positions}")
    for j, a in zip(positions, assignments):
        if not 0 <= j < n:
            raise ValueError(f"position {j} outside [0, {n})")
        if a not in (0, 1):
            raise ValueError(f"assignment {a} at position {j} is not a bit")
    table = dict(zip(positions, assignments))
    if odd:
        if table.get(0, 1) != 1:
            raise ValueError("bit 0 must be 1: constrained integers are odd")
        table[0] = 1
    order = sorted(table)
    return DigitConstraint(n, tuple(order), tuple(table[j] for j in order))


def parse_assignments(text):
    """Parse ``"j:alpha,j:alpha"`` into (positions, assignments)."""
    text = text.strip()
    if not text:
        return [], []
    positions, bits = [], []
    for item in text.split(","):
        m = re.fullmatch(r"\s*(\d+)\s*:\s*(\d+)\s*", item)
        if m is None:
            raise ValueError(f"bad constraint item {item!r}")
        positions.append(int(m.group(1)))
        bits.append(int(m.group(2)))
    return positions, bits


def parse_constraint(text):
    """Parse the text form ``n=<int>;A=<j:alpha,...>``."""
    m = re.fullmatch(r"\s*n\s*=\s*(\d+)\s*;\s*A\s*=(.*)", text)
    if m is None:
        raise ValueError(f"bad constraint text {text!r}")
    positions, bits = parse_assignments(m.group(2))
    return make_constraint(int(m.group(1)), positions, bits)


def constraint_from_dict(d):
    return make_constraint(d["n"], d["positions"], d["assignments"])


def f_eval(x, c):
    """Digit indicator: 1 iff ``x`` carries the prescribed bits."""
    if not 0 <= x < c.N:
        raise ValueError(f"x={x} outside [0, 2^{c.n})")
    return int((x & c.mask) == c.pattern)


def f_mask(xs, c):
    """Vectorised indicator over an integer array (no range check)."""
    xs = np.asarray(xs, dtype=np.int64)
    return (xs & c.mask) == c.pattern


def count_constrained(c):
    return 1 << (c.n - c.size)


def expectation(c):
    """Normalised average E[f] = 2^-|A|."""
    return 2.0 ** (-c.size)


def residue_counts(c, q):
    """counts[m] = #{x < 2**n : f(x) = 1, x = m mod q}, by a DP over the bits."""
    counts = np.zeros(q, dtype=np.int64)
    counts[c.pattern % q] = 1
    for j in c.free_positions:
        counts = counts + np.roll(counts, pow(2, j, q))
    return counts


def enumerate_constrained(c):
    """All x < 2**n with f(x) = 1, ascending."""
    free = c.free_positions
    if len(free) > MAX_ENUM_FREE_BITS:
        raise GuardError(f"{len(free)} free bits exceed the enumeration cap")
    counter = np.arange(1 << len(free), dtype=np.int64)
    xs = np.full(counter.shape, c.pattern, dtype=np.int64)
    # free positions ascend, so embedding the counter bits keeps the order
    for i, j in enumerate(free):
        xs |= ((counter >> i) & 1) << j
    return xs


def restrict_low_bits(c, nu, z):
    """Constraint for ``x -> f(z + 2**nu * x)`` on ``n - nu`` bits.

    Returns None when ``z`` contradicts a prescribed low bit, in which case
    the restricted indicator is identically zero.
    """
    if not 1 <= nu < c.n:
        raise ValueError(f"nu={nu} must lie in [1, {c.n})")
    if not 0 <= z < (1 << nu):
        raise ValueError(f"z={z} outside [0, 2^{nu})")
    positions, bits = [], []
    for j, a in c.pairs():
        if j < nu:
            if (z >> j) & 1 != a:
                return None
        else:
            positions.append(j - nu)
            bits.append(a)
    return make_constraint(c.n - nu, positions, bits, odd=False)
