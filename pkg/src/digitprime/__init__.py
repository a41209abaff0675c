"""Primes with prescribed binary digits: exact counts, spectra and identities."""
__version__ = "0.1.0"

from ._numeric import GuardError
from .bitconstraint import (
    DigitConstraint, make_constraint, parse_constraint, f_eval, count_constrained,
    expectation, enumerate_constrained)
from .numthy import (
    SieveTables, ReducedFraction, build_sieve, chebyshev_psi, ramanujan_sum,
    reduce_fraction, farey_odd_squarefree)
from .spectra import (
    fhat, fhat_all_dyadic, lemma1_check, lemma2_check, lemma3_check, lemma4_check,
    kappa_bound, exp_sum_lambda)
from .characters import (
    DirichletCharacter, character_group, conductor_and_primitive, gauss_sum,
    verify_gauss_factorization, verify_twist_identity, psi_chi,
    interval_twisted_lambda_max, twisted_digit_sum, twisted_digit_sum_fourier,
    twisted_digit_sum_even_split)
from .circle import (
    choose_B, decompose_arcs, vinogradov_diagnostic, assumption_a_check,
    main_term_pipeline, theorem_check)
