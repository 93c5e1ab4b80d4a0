"""Zero-uncertainty states for degenerate projective measurements.

Decides whether bipartite states are zero-uncertainty states for families
of PVMs, checks the equal-dimension rigidity conclusions, builds the
non-rigid constructions and computes the block normal form of A-ZUS data.
"""

from .algebra import (
    MatrixAlgebra,
    WedderburnStructure,
    center,
    commutant,
    generate_algebra,
    md_algebra,
    md_member,
    minimal_central_projections,
    wedderburn_decompose,
)
from .cpmaps import (
    LambdaMap,
    choi_operator,
    conditional_operators,
    is_common_zus,
    is_zus,
    kraus_rank,
    lambda_apply,
    lambda_map,
    phi_apply,
)
from .linalg import ToleranceConfig
from .normal_form import a_zus_check, compute_normal_form, full_algebra_form, restricted_phi, sampled_zus_equivalence
from .objects import BipartiteState, Pvm, PvmFamily, max_entangled_state, paper_examples, validate_pvm, validate_state
from .rigidity import maximally_mixed_defect, purity, schmidt_coefficients, verify_rigidity

__version__ = "0.1.0"
