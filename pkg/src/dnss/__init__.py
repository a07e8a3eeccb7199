"""dnss: exact consistency analysis for polynomial DAE systems.

Decides whether a system of ordinary polynomial differential equations over
the rationals is consistent, by prolonging the system and testing algebraic
ideal membership, and produces certificates (cofactor representations of 1 or
of a claimed polynomial power) that verify by exact expansion. Also evaluates
the closed-form prolongation-order and power bounds exactly, with
exponent-tower arithmetic.
"""

from .ring import (AUX, CONTROL, DEGREVLEX, LEX, STATE, Block, DegRevLex,
                   DiffPoly, JetVar, Lex, Monomial, MonomialOrder, aux,
                   control, degree, leading_monomial, leading_term,
                   partial_derivative, poly_arith, poly_to_text, state)
from .diffcore import (ProlongedFamily, order_of, prolong, substitute,
                       total_derivative)
from .groebner import (GroebnerBasis, MembershipWitness,
                       PositiveDimensionError, buchberger, contains_one,
                       dimension, eliminate, is_member, macaulay_membership,
                       min_power_in_ideal, normal_form, zero_dim_radical)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
