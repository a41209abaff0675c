"""
Divisibility of constrained integers and the minor arcs
=======================================================

How evenly do constrained integers fall into residue classes mod q0? The
deviation is bounded through Fourier coefficients at a/q0. On the other
side of the circle method, |S(alpha)| stays far below the Vinogradov bound.
"""
from digitprime import build_sieve, make_constraint, assumption_a_check, vinogradov_diagnostic
from digitprime.numthy import odd_squarefree_below

c = make_constraint(16, [0, 2, 9], [1, 0, 1])
print(" q0   count   expected   deviation   allowance")
for q0 in odd_squarefree_below(40)[1:10]:
    a = assumption_a_check(c, q0)
    print(f"{q0:3d} {a.count:7d} {a.expected:10.2f} {a.actual:11.3f} {a.allowance:11.2f}")

t = build_sieve(1 << 18)
res = vinogradov_diagnostic(1 << 18, 16, samples=20, t=t, seed=1)
print("|S(alpha)| / bound: max %.2e, median %.2e" % (res["max_ratio"], res["median_ratio"]))
