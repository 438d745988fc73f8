"""Pure-state entanglement classes, activation and distillation under Abelian superselection rules."""

__version__ = "0.1.0"

from .classify import (  # noqa: E402
    ClassificationReport,
    EntClass,
    classify,
    distillation_number,
    is_n_distillable,
    is_one_distillable,
)
from .density import DensityOperator  # noqa: E402
from .fock import (  # noqa: E402
    BasisLabel,
    ModeLayout,
    Party,
    PureState,
    is_product,
    make_ket,
    project,
    schmidt_coefficients,
    tensor,
)
from .oracle import is_ppt, partial_transpose, twirled_one_distillable  # noqa: E402
from .protocols import (  # noqa: E402
    build_activator,
    protocol_A,
    protocol_B,
    qnd_measure,
    verify_activation,
)
from .ssr import ChargeRule, SectorKey, is_locally_invariant, sector_support, twirl_pure  # noqa: E402

__all__ = [
    "BasisLabel",
    "ChargeRule",
    "ClassificationReport",
    "DensityOperator",
    "EntClass",
    "ModeLayout",
    "Party",
    "PureState",
    "SectorKey",
    "build_activator",
    "classify",
    "distillation_number",
    "is_locally_invariant",
    "is_n_distillable",
    "is_one_distillable",
    "is_ppt",
    "is_product",
    "make_ket",
    "partial_transpose",
    "project",
    "protocol_A",
    "protocol_B",
    "qnd_measure",
    "schmidt_coefficients",
    "sector_support",
    "tensor",
    "twirl_pure",
    "twirled_one_distillable",
    "verify_activation",
]
