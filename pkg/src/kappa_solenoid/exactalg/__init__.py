from .group import (
    Algebraic,
    BElement,
    GroupElement,
    Parameter,
    Transcendental,
    element,
    from_word,
    gen_u,
    gen_v,
    identity,
    power_vector,
)
from .intmatrix import IntMatrix, det_bareiss, mat_mul, smith_normal_form
from .poly import (
    DeformationParams,
    IntPolynomial,
    companion_matrix,
    count_positive_roots,
    normalize_poly,
    params_to_a,
    resultant,
    sylvester_matrix,
)
