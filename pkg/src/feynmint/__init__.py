"""Exact Feynman-graph integrals for covers of elliptic curves.

Computes generating series of Hurwitz numbers and stationary descendant
Gromov-Witten invariants attached to labeled multigraphs, using exact
integer/rational arithmetic throughout: a flip-signature pipeline for speed,
a naive series-expansion oracle for validation, and an exact Eisenstein-basis
fitter for the quasimodularity of the assembled series.
"""

from .errors import (
    ContextMismatchError,
    FeynmintError,
    InputError,
    InternalError,
    LimitError,
)
from .graph import (
    FeynmanGraph,
    catalog_automorphisms,
    catalog_graph,
    catalog_names,
    count_automorphisms,
    first_betti,
    nonloop_valence,
    total_genus,
    validate,
)
from .integral import (
    DegreeSeries,
    PsiData,
    assemble_generating_series,
    collapse_to_univariate,
    descendant_integral_branchtype,
    descendant_integral_degree,
    feynman_integral_branchtype,
    feynman_integral_degree,
    psi_data,
)
from .oracle import TruncationSpec, naive_integral, naive_integral_ordered, truncated_propagator
from .polyarith import (
    SparsePoly,
    TruncatedSeries,
    VarContext,
    coefficient_of_term,
    poly_mul,
    series_invert,
    series_mul,
)
from .propagator import (
    const_term,
    descendant_edge_term,
    descendant_loop_coefficient,
    loop_coefficient,
    non_const_term,
    s_series,
)
from .quasimodular import (
    QuasimodularFit,
    eisenstein,
    fit_quasimodular,
    monomial_basis,
    qseries_from_collapsed,
)
from .signature import flip_signature, signature_and_multiplicities

__version__ = "0.1.0"
