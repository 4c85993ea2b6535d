"""Norms and norm-preserving extensions of quadratic forms on spaces whose
unit ball is the intersection of two ellipsoids."""

from .core import (
    InnerProduct,
    QuadOnSubspace,
    Subspace,
    SymForm,
    TwoEllipsoidSpace,
    embed_form,
    evaluate_form,
    gram_restrict,
    max_norm,
)
from .errors import (
    DegenerateZError,
    ExtensionVerificationError,
    InvalidInputError,
    NotPositiveDefiniteError,
    PencilInfeasibleError,
    QuadExtError,
    RankDeficientError,
)
from .extend import (
    ExtensionReport,
    HyperplaneStep,
    build_flag,
    extend,
    extend_hyperplane,
    find_z,
    renormalize,
)
from .normcalc import NormResult, norm_on_subspace, polynomial_norm, sandwich_feasible
from .pencil import (
    FeasibleInterval,
    SandwichCertificate,
    check_pointwise_max,
    dominating_combination,
    lemma_a_combination,
    maximize_concave_on_unit_interval,
    pencil_min_eig,
    psd_interval,
)
from .spectral import (
    EigenSplit,
    RepresentingOperator,
    orthogonal_complement,
    representing_operator,
    split_eigenspaces,
    subspace_intersection,
)
from .verify import (
    InstanceSpec,
    VerificationReport,
    lemma_a_instance,
    random_instance,
    sample_norm_lower_bound,
    verify_extension,
)

__all__ = [
    "DegenerateZError",
    "EigenSplit",
    "ExtensionReport",
    "ExtensionVerificationError",
    "FeasibleInterval",
    "HyperplaneStep",
    "InnerProduct",
    "InstanceSpec",
    "InvalidInputError",
    "NormResult",
    "NotPositiveDefiniteError",
    "PencilInfeasibleError",
    "QuadExtError",
    "QuadOnSubspace",
    "RankDeficientError",
    "RepresentingOperator",
    "SandwichCertificate",
    "Subspace",
    "SymForm",
    "TwoEllipsoidSpace",
    "VerificationReport",
    "build_flag",
    "check_pointwise_max",
    "dominating_combination",
    "embed_form",
    "evaluate_form",
    "extend",
    "extend_hyperplane",
    "find_z",
    "gram_restrict",
    "lemma_a_combination",
    "lemma_a_instance",
    "max_norm",
    "maximize_concave_on_unit_interval",
    "norm_on_subspace",
    "orthogonal_complement",
    "pencil_min_eig",
    "polynomial_norm",
    "psd_interval",
    "random_instance",
    "renormalize",
    "representing_operator",
    "sample_norm_lower_bound",
    "sandwich_feasible",
    "split_eigenspaces",
    "subspace_intersection",
    "verify_extension",
]

__version__ = "0.1.0"
