"""
Characters, conductors and Gauss sums
=====================================

Every Dirichlet character mod q comes from a primitive character mod its
conductor. The Gauss sum of the induced character is predicted from the
primitive one, and twisted exponential sums split into a primitive part
and a Ramanujan sum.
"""
from collections import Counter

from digitprime import (
    character_group, conductor_and_primitive, gauss_sum, verify_gauss_factorization,
    verify_twist_identity)

q = 60
group = character_group(q)
print(f"{len(group)} characters mod {q}")
print("conductors:", dict(sorted(Counter(chi.conductor for chi in group).items())))

# a character induced from a smaller modulus
chi = next(chi for chi in group if chi.conductor == 15)
q1, chi1 = conductor_and_primitive(chi)
print("chi mod", q, "is induced from a primitive character mod", q1)
print("|tau(chi1)|^2 =", round(abs(gauss_sum(chi1)) ** 2, 10))
# q/q1 = 4 is not squarefree, so tau(chi) vanishes
print("tau(chi) =", gauss_sum(chi), " factorization gap",
      verify_gauss_factorization(chi).discrepancy)

worst = max(verify_twist_identity(chi, k).discrepancy for chi in group for k in range(q))
print("largest twist-identity gap over all chi and k:", worst)
