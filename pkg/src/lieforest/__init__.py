"""Exact computer algebra for the free post-Lie algebra on planar rooted trees.

Forests, truncated series, grafting and the Grossman-Larson product,
exponentials, and Butcher/RKMK order theory.
"""

from .butcher import (
    ButcherTableau,
    OrderCondition,
    attained_order,
    elementary_weight,
    exact_solution_character,
    generate_order_conditions,
    get_tableau,
    order_of_tableau,
    rk_character,
    rk_postlie_character,
    rkmk_character,
)
from .exponential import bernoulli, dexpinv, exp_concat, exp_gl, magnus_terms, magnus_theta, phi_series
from .forest import (
    NonplanarForest,
    NonplanarTree,
    ParseError,
    PlanarForest,
    PlanarTree,
    b_minus,
    b_plus,
    enumerate_nonplanar_trees,
    enumerate_planar_trees,
    parse_forest,
    parse_tree,
    render,
    symmetry_factor,
    to_nonplanar,
    tree_factorial,
)
from .postlie import (
    adjoint_product,
    commutator,
    curvature_residual,
    double_bracket,
    gl_dual_coproduct,
    gl_product,
    gl_product_via_roots,
    left_graft,
    post_lie_residuals,
    prelie_graft,
)
from .series import Series, TensorSeries, concat_product, coshuffle, is_character, is_infinitesimal_character

__version__ = "0.1.0"

__all__ = [
    "ButcherTableau", "OrderCondition", "attained_order", "elementary_weight",
    "exact_solution_character", "generate_order_conditions", "get_tableau", "order_of_tableau",
    "rk_character", "rk_postlie_character", "rkmk_character",
    "bernoulli", "dexpinv", "exp_concat", "exp_gl", "magnus_terms", "magnus_theta", "phi_series",
    "NonplanarForest", "NonplanarTree", "ParseError", "PlanarForest", "PlanarTree", "b_minus",
    "b_plus", "enumerate_nonplanar_trees", "enumerate_planar_trees", "parse_forest", "parse_tree",
    "render", "symmetry_factor", "to_nonplanar", "tree_factorial",
    "adjoint_product", "commutator", "curvature_residual", "double_bracket", "gl_dual_coproduct",
    "gl_product", "gl_product_via_roots", "left_graft", "post_lie_residuals", "prelie_graft",
    "Series", "TensorSeries", "concat_product", "coshuffle", "is_character",
    "is_infinitesimal_character",
]
