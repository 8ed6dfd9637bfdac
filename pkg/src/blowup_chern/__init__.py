"""Integral cohomology rings and total Chern classes of blow-ups.

Given a manifold M, a center X with complex normal bundle, and the usual
restriction data, this package constructs the cohomology ring of the blow-up
of M along X and evaluates its total Chern class by two independent routes,
with exact integer arithmetic throughout.
"""

from .ring import (
    AlgebraError,
    DegreeMismatch,
    Element,
    GeneratorSpec,
    GradedBasis,
    IllDefinedRingMap,
    NonHomogeneousRelation,
    Ring,
    RingMap,
    RingMismatch,
    UnknownGenerator,
    ZeroTruncation,
    apply_map,
    identity_map,
    make_ring,
)
from .chern import (
    BadPartition,
    NoPairing,
    NonUnitLeadingTerm,
    Pairing,
    ProjectiveBundle,
    RankMismatch,
    TotalClass,
    chern_numbers,
    dual_total_class,
    exceptional_total_chern,
    partitions_of,
    projective_bundle_ring,
    tensor_line_bundle,
    total_class,
    total_inverse,
)
from .thom import SubgroupViolation, ThomRing, q_pullback, relative_class_chern, thom_ring
from .blowup import (
    CALIBRATED,
    PAPER,
    BlowupContext,
    BlowupElement,
    DimensionMismatch,
    EmbeddingModel,
    ManifoldModel,
    NonLiftableCoefficient,
    SignConvention,
    VerifyReport,
    blowup_total_chern,
    blowup_total_chern_via_thom,
    build_blowup,
    f_pullback,
    gysin_exceptional,
    restrict_to_E,
    verify_report,
)
from .models import (
    CATALOG_NAMES,
    ModelFormatError,
    ModelSemanticError,
    ModelSyntaxError,
    UnknownModel,
    catalog,
    parse_model,
    serialize_result,
    write_model,
)
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
