"""Exact computation with the p-ary codes spanned by subspace incidence
matrices of PG(n,q): enumeration, code linear algebra, projection and
down-sum maps, small-weight decomposition, and counting analyses."""

from .analysis import (
    BlockingReport,
    DichotomyReport,
    ExpanderReport,
    SpectrumReport,
    blocking_check,
    classify_rich_poor,
    classify_thick_thin,
    dichotomy_check,
    expander_check,
    find_delta,
    spectrum,
)
from .code import (
    CodeHandle,
    Codeword,
    build_code,
    char_function,
    combination,
    embed_planar,
    enumerate_codewords,
    restrict,
    supp_i,
)
from .constructions import (
    LabeledInstance,
    disjoint_union,
    hermitian_unital,
    random_combination,
)
from .decompose import (
    Decomposition,
    decompose,
    delta_cap,
    exhaustive_decompose,
    verify_combination,
)
from .geometry import (
    Geometry,
    PointSet,
    Subspace,
    enumerate_subspaces,
    gaussian,
    incident,
    meet,
    projective_geometry,
    span,
    theta,
)
from .gf import Field, arith, factor_prime_power, field_new, frobenius
from .incidence import DesignParameters, IncidenceMatrix, build_matrix, design_parameters
from .maps import KernelHandle, ProjectionFrame, check_commutation, down_sum, kernel_basis, project
from .report import VERSION as __version__
from .suite import run_suite
