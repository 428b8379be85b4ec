"""Exact computation in swapping algebras, their rank-n quotients, and the
cluster coordinates of triangulated polygons."""

from swapalg.cluster_x2 import (
    ExchangeMatrix,
    RationalFunc,
    Seed,
    Triangulation,
    check_flip_compat,
    check_mutation_poisson,
    check_theta_poisson,
    enumerate_triangulations,
    epsilon,
    fg_bracket,
    fg_from_points,
    flip,
    mutate,
    theta,
)
from swapalg.core_ring import PointSet, SwapFraction, SwapPoly, fraction, mk_point_set, pair
from swapalg.cross_ratio import check_cross_ratio_conditions, cr, cross_fraction
from swapalg.errors import *  # noqa: F401,F403
from swapalg.expr import eval_expr, parse_expr, to_text
from swapalg.rank_reduction import (
    DeterminantSpec,
    RankModel,
    delta_L,
    delta_R,
    determinant,
    eq_in_Qn,
    expand_to_model,
    is_zero_Zn,
    normal_form_model,
    normal_form_Zn,
    random_zero_test,
)
from swapalg.swap_bracket import bracket, bracket_fraction, bracket_generators, bracket_poly, linking_number
from swapalg.verify import SuiteReport, run_suite

__version__ = "0.1.0"
