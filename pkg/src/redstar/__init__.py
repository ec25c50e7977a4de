"""redstar: exact deformation quantization and phase-space reduction on a
trivial product model, with order-by-order verification of the algebraic
identities of the reduced *-algebra and its representation theory."""

from .scalars import GaussRational, PiScalar
from .poly import Poly
from .series import LambdaSeries, series_inverse, series_mul, series_sqrt
from .funcs import Func
from .diffop import DiffOperator, diffop_apply, diffop_formal_adjoint
from .integrate import gaussian_integrate
from .geometry import (
    DensityWeight,
    LieAlgebraData,
    ModelSpace,
    abelian_lie,
    aff1,
    classical_BC_member,
    classical_reduced_bracket,
    fiber_integral,
    fundamental_vector_field,
    gaussian_base_weight,
    heisenberg3,
    lebesgue_weight,
    lift_density,
    modular_vector_field,
    poisson_bracket,
)
from .starprod import (
    StarProduct,
    check_strong_invariance,
    moyal,
    neumaier_N,
    schroedinger_rep,
    star_G,
    star_std,
    star_total,
    stdrep,
)
from .koszul import (
    ReductionConfig,
    SuperObservable,
    deformed_homotopy,
    deformed_restriction,
    homotopy_h,
    koszul,
    left_module,
    prolong,
    quantized_BC_member,
    quantized_koszul,
    reduced_star,
    right_module,
)
from .involution import (
    AutomorphismSeries,
    PositiveFunctional,
    conj_transport,
    density_ratio_hat,
    gns_check,
    inner_product_mu,
    involution_comparison,
    kms_check,
    modular_class,
    omega_mu,
    reduced_involution,
)
from .morita import (
    InducedVector,
    InnerProductModule,
    KernelSpace,
    RankOneOperator,
    VerticalOperator,
    complete_positivity_sample,
    crossed_act,
    crossed_conv,
    crossed_star,
    deformation_comparison_H,
    external_tensor,
    fullness_element,
    inner_product_red,
    rank_one_adjoint,
    rank_one_apply,
    rank_one_compose,
    rieffel_induce,
    vertical_act,
    vertical_adjoint,
    vertical_compose,
)

__version__ = "0.1.0"
