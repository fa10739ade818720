"""Exact arithmetic layer: fields, polynomials, factorization, linear algebra."""

from .fields import (FFElement, FiniteField, MQElement, MQField, QQ, RationalField,
                     coerce_into, compose_mq, embed_mq, mq_is_square, mq_square_class_rep,
                     rational, rational_is_square, rational_squarefree_class,
                     sqrt_with_extension, unify_fields)
from .intnt import (factorint, is_perfect_square, is_prime, legendre, next_prime,
                    primes_up_to, squarefree_decompose, squarefree_kernel)
from .poly import (Poly, RatFunc, ResidueElement, ResidueField, lagrange_interpolate)
from .factor import (factor_poly, ff_factor, is_irreducible, poly_roots_in_field,
                     residue_is_square, split_place_over)
from .linalg import (char_poly_int, hermite_normal_form, identity, int_det,
                     integer_kernel, mat_mul, mat_sub, rational_det, rational_rank)

__all__ = [
    "FFElement", "FiniteField", "MQElement", "MQField", "QQ", "RationalField",
    "coerce_into", "compose_mq", "embed_mq", "mq_is_square", "mq_square_class_rep",
    "rational", "rational_is_square", "rational_squarefree_class",
    "sqrt_with_extension", "unify_fields",
    "factorint", "is_perfect_square", "is_prime", "legendre", "next_prime",
    "primes_up_to", "squarefree_decompose", "squarefree_kernel",
    "Poly", "RatFunc", "ResidueElement", "ResidueField", "lagrange_interpolate",
    "factor_poly", "ff_factor", "is_irreducible", "poly_roots_in_field",
    "residue_is_square", "split_place_over",
    "char_poly_int", "hermite_normal_form", "identity", "int_det",
    "integer_kernel", "mat_mul", "mat_sub", "rational_det", "rational_rank",
]
