"""Character formulas for theta lifts of U(1) to U(p,q) and U(n,n+1), with numerical oracles."""

from ._kernels import BACKEND
from .cartan import (
    CartanLabel,
    CoveredTorusPoint,
    IndexSets,
    cayley_generator,
    cayley_transform,
    chamber_id,
    embed_in_group,
    index_sets,
    is_regular,
    torus_matrix,
)
from .characters import (
    CharacterSpec,
    NormalizationConstants,
    NormalizedValue,
    epsilon_character,
    omega,
    sigma_term,
    theta_lift_unn1,
    theta_u1,
    theta_upq,
)
from .errors import (
    CayleyDomainError,
    CharliftError,
    DomainError,
    EmptyGroupError,
    PoleOnContourError,
    RangeError,
    RegularityError,
    SingularityError,
)
from .oracles import (
    QuadratureParams,
    VerificationReport,
    chamber_sign_scan,
    contour_unit_circle_moment,
    limit_direction,
    verify_theta_lift,
    verify_theta_upq,
)
from .rootsys import (
    DeltaQuotient,
    RootDatum,
    build_root_datum,
    delta_quotient,
    strongly_orthogonal_set,
    weyl_denominator,
)

__version__ = "0.1.0"
