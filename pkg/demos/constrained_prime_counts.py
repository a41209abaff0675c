"""
Primes with prescribed binary digits
====================================

Count primes below 2^n with some binary digits fixed and compare with
2^-r N / ln N. The ratio drifts slowly towards 1, the same way pi(N) ln N / N does.
"""
import numpy as np

from digitprime import build_sieve, make_constraint, main_term_pipeline, theorem_check

t = build_sieve(1 << 22)

for n in range(14, 23, 2):
    rep = theorem_check(make_constraint(n, [0], [1]), t)
    print(f"n={n:2d}  odd primes {rep.exact_count:7d}  ratio {rep.ratio:.4f}")

# one extra prescribed bit halves the count, wherever it sits
n = 22
ratios = np.array([[theorem_check(make_constraint(n, [0, j], [1, a]), t).ratio
                    for j in range(1, n)] for a in (0, 1)])
print("two-bit ratios: mean %.4f, spread %.4f" % (ratios.mean(), ratios.std()))

# the weighted sum of Lambda over constrained integers against 2 E[f] N
c = make_constraint(20, [0, 5, 11], [1, 1, 0])
rep = main_term_pipeline(c, t)
print(f"{c}: direct {rep.direct:.1f}  main {rep.main:.1f}  rel. residual {rep.rel_residual:.2e}")
