"""rsdkit: a workbench for restricted syndrome decoding.

Restricted decoding asks for e with e H^T = s over F_p whose entries all lie
in a small set E.  The package provides the problem's standard
transformations (affine shifts, multiplicative randomization and
truncation), its expansion to regular decoding with two ISD solvers, exact
and compact reductions to lattice problems (closest-vector and
list-of-close/short-vectors), a desk-scale integer-lattice toolkit
(exact LLL/BKZ, enumeration with optional linear pruning), and closed-form
attack-cost estimators that regenerate the published cost tables.
"""

from .errors import RsdkitError
from .ffmat import FpMatrix, FpVector, PrimeField
from .ressd import (
    ResSdInstance,
    RestrictionSet,
    affine_shift,
    check_solution,
    cross_restriction,
    enumerate_solutions,
    generate_instance,
    load_instance,
    mult_randomize,
    mult_truncate,
    naive_solve,
    pull_back,
    save_instance,
)
from .regsd import (
    BiRegularPermutation,
    ExpandedInstance,
    LightRegularVector,
    enum_isd,
    expand,
    phi,
    phi_inv,
    prange_regular,
    sample_biregular,
)
from .lattice import (
    BallSpec,
    EnumConfig,
    LatticeBasis,
    bkz,
    code_lattice,
    gh_count,
    gh_lambda1,
    gram_schmidt,
    gsa_profile,
    list_enum,
    lll,
    svp_enum,
)
from .reductions import (
    CompactReductionContext,
    CvpReductionContext,
    affine_diameter,
    classify_degeneracy,
    compact_listcvp,
    cvp_solution_to_ressd,
    guess_blocks,
    listsvp_reduce,
    mean_center,
    median_radius,
    ressd_to_cvp,
    success_prob_mc,
)
from .estimator import (
    AttackEstimate,
    CostModelConfig,
    enum_isd_cost,
    golden_diff,
    hybrid_batchcvp_estimate,
    hybrid_listcvp_estimate,
    listcvp_enum_cost,
    naive_cost,
    optimize_enum_isd,
    prange_success_log2,
    regenerate_table,
)

__version__ = "0.1.0"
