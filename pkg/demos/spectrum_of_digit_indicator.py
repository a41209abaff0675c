"""
Spectrum of a digit indicator
=============================

Fixing a few binary digits of x < 2^n gives a 0/1 function f whose Fourier
transform factors over the bits. We look at how much spectral mass it has
on the dyadic grid and at odd rationals.
"""
import numpy as np

from digitprime import make_constraint, fhat, fhat_all_dyadic, lemma1_check, lemma3_check

# odd integers below 2^12 whose bits 3 and 7 are 1 and 0
c = make_constraint(12, [3, 7], [1, 0])
print(c, " |A| =", c.size, " rho =", round(c.rho, 3))

# fhat(0) is the density of the constrained set
print("fhat(0) =", fhat(0.0, c))

samples = fhat_all_dyadic(c)
mags = samples.magnitudes
print("Parseval:", np.sum(mags ** 2), "vs E[f] =", 2.0 ** -c.size)
print("largest dyadic coefficients at k =", np.argsort(mags)[::-1][:5])

# total dyadic mass and the smallest exponent C that would still bound it
rep = lemma1_check(c, C=4)
print(f"dyadic mass {rep.computed:.3f}, bound {rep.bound:.3g}, minimal C {rep.c_min:.3f}")

# odd denominators see very little of f
for Q in (4, 6, 8):
    print("Q =", Q, " 2^r sum |fhat(a/q)| =", round(lemma3_check(c, Q).computed, 6))
