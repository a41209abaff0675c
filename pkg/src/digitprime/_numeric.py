"""Shared numeric helpers: exact-symmetry root tables and compensated sums."""
import math
from functools import lru_cache

import numpy as np


class GuardError(ValueError):
    """Raised when a size guard (desk-scale limit) is exceeded."""


@lru_cache(maxsize=256)
def roots_of_unity(order):
    """Return e(m/order) for m = 0..order-1 as a read-only complex array.

    Values at multiples of order/4 are exact (1, i, -1, -i), so factors like
    1 + e(1/2) vanish exactly instead of leaving a 1e-16 residue.
    """
    if order < 1:
        raise ValueError("order must be positive")
    m = np.arange(order, dtype=np.int64)
    quadrant = (4 * m) // order
    rem = 4 * m - quadrant * order
    theta = (np.pi / 2) * rem / order
    c, s = np.cos(theta), np.sin(theta)
    re = np.choose(quadrant, [c, -s, -c, s])
    im = np.choose(quadrant, [s, c, -s, -c])
    out = re + 1j * im
    out.setflags(write=False)
    return out


def csum(values):
    """Correctly rounded sum of a real or complex sequence (via math.fsum)."""
    arr = np.asarray(values)
    if np.iscomplexobj(arr):
        return complex(math.fsum(arr.real.tolist()), math.fsum(arr.imag.tolist()))
    return math.fsum(arr.tolist())


def valuation(n, p):
    """Exponent of the prime p in n (n != 0)."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v
