"""Exact tropical machinery for sl3-laminations on marked surfaces.

The package is organized around combinatorial ideal triangulations
(:mod:`sl3shear.surface`), the associated cluster seeds and mutation
sequences (:mod:`sl3shear.seeds`), exact max-plus tropical points and
piecewise-linear maps (:mod:`sl3shear.tropical`), concrete lamination
pictures with their shear coordinates (:mod:`sl3shear.laminations`),
reconstruction of pictures from coordinates (:mod:`sl3shear.reconstruct`)
and gluing of pinned laminations (:mod:`sl3shear.glue`).  All arithmetic
is exact, over :class:`fractions.Fraction`.
"""

from .surface import (
    IdealTriangulation,
    MarkedSurfaceSpec,
    SurfaceError,
    SpecViolatesSurfaceConditions,
    SelfFoldedUnavoidable,
    NotInteriorEdge,
    FlipCreatesSelfFolded,
    SameEdge,
    ResultViolatesSurfaceConditions,
)
from .seeds import (
    Sl3IndexSet,
    ExchangeMatrix,
    Mutate,
    Permute,
    FrozenIndexMutation,
    exchange_matrix,
    m_matrix,
    extended_matrix,
    mutate_matrix,
    flip_mutation_sequence,
    dynkin_mutation_sequence,
)
from .tropical import (
    TropicalPoint,
    SeedMismatch,
    BadLabeling,
    mutate_x,
    mutate_a,
    apply_steps,
    flip_x_closed_form,
    apply_flip,
    ensemble,
    dynkin_cluster,
    principal_embed,
)
from .laminations import (
    GlobalPicture,
    add_peripheral_chain,
    honeycomb_leg_split,
    Honeycomb,
    CornerArc,
    SpiralEnd,
    ComponentSum,
    Component,
    PinnedLamination,
    InvalidPicture,
    UnknownComponentKind,
    CarrierMismatch,
    NegativeNonPeripheralWeight,
    shear_unfrozen,
    shear_frozen,
    coords_of_components,
    geometric_ensemble,
    dynkin_geometric,
    normalize_integral,
    elementary_lamination,
)
from .reconstruct import (
    TruncationTooShallow,
    identifier_relations,
    NonIntegralInput,
    reconstruct,
    traveler_trace,
    roundtrip_check,
    default_depth,
)
from .glue import (
    ShiftElement,
    UnknownInterval,
    glue_coordinates,
    glue_laminations,
    shift_action,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
