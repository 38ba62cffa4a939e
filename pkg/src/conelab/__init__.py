"""Chart-based Riemannian geometry verification engine.

Builds metric cones, contact metric / K-contact / Sasakian structures and
almost-Kaehler diagnostics over closed-form catalog manifolds, and certifies
the identities relating them by residual, using exact truncated-Taylor (jet)
differentiation throughout.
"""

from .chart import ManifoldChart, jet_point
from .catalog import CatalogEntry, StructureSpec
from .cone import (
    ConeChart,
    ConeSampleSet,
    build_cone,
    check_connection_relations,
    check_curvature_relation,
    check_lemma_codiff,
    check_lemma_laplacian,
    lift_form,
    lift_vector,
)
from .contact import (
    ConeSymplecticData,
    ContactMetricStructure,
    build_cone_symplectic,
    build_contact,
    kcontact_via_ricci,
    killing_residual,
    parallel_omega_residual,
    sasaki_residual,
)
from .errors import (
    ConeCompletionError,
    DegenerateMetricError,
    DegeneratePairError,
    DomainError,
    EngineError,
    ImpossiblePairError,
    IncompatibleStructureError,
    JetOrderError,
    NotContactMetricError,
)
from .geometry import (
    OrthonormalFrame,
    TensorField,
    TensorValue,
    christoffel,
    codifferential_oneform,
    covariant_derivative,
    laplacian_scalar,
    orthonormal_frame,
    ricci,
    riemann,
    scalar_curvature,
)
from .jets import Jet, JetScalar
from .pairs import (
    StructurePair,
    anticommutator_lambda,
    build_third_structure,
    s2_family_check,
)
from .report import CheckReport, SuiteConfig, report_json
from .suites import SUITES, integrate_level_set, run_suite
from .weitzenboeck import (
    RadialProfile,
    WeitzenboeckPointData,
    extract_radial_profile,
    weitzenboeck_data,
    weitzenboeck_solve,
)

__version__ = "0.1.0"
