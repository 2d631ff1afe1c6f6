"""Order trees presented finitely, their path and ray spaces, and the
verified constructions between them."""

from .checks import (
    FamilyMember,
    SequenceSpec,
    family_report,
    hausdorff_witness,
    hereditarily_complete,
    is_compact,
    lindelof_number,
    mono_normal_operator,
    mono_normal_scan,
    seeded_cover,
    standard_family,
    tau_seq_limit,
    ultrapartition,
)
from .corpus import (
    CanonicalSignature,
    GenParams,
    alexandroff_duplicate,
    corpus_instance,
    corpus_names,
    corpus_sources,
    discrete,
    generate_family,
    generate_tree,
    mich_refinement_report,
    n_resolution,
    one_point_compactification,
    shrink_tree,
    signature_match,
    signatures_equal,
    space_signature,
)
from .counts import C, Count
from .dsl import (
    DslError,
    FamilySpec,
    parse_coord,
    parse_family,
    parse_source,
    parse_tree,
    print_family,
    print_tree,
)
from .emit import map_to_dot, map_to_json, space_to_dot, tree_from_json, tree_to_dot, tree_to_json
from .laminar import GroundFamily, ground_family, laminar_to_tree, subbase_embedding
from .ordinal import Ordinal, parse_ordinal
from .points import Space
from .regions import Atom, Basic, Ctx, PointClass, Sel, ValidationError, gen_of
from .staged import NodeCoord, Slice, StagedTree, Tree, validate
from .transforms import (
    MapRow,
    REST,
    SpaceMap,
    closed_subspace_as_ray_space,
    compact_ray_to_path,
    compose,
    dense_metrizable_core,
    lex_sum,
    path_to_compact_ray,
    realize_ray_space,
    verify_homeomorphism,
)

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "Basic",
    "C",
    "CanonicalSignature",
    "Count",
    "Ctx",
    "DslError",
    "FamilyMember",
    "FamilySpec",
    "GenParams",
    "GroundFamily",
    "MapRow",
    "NodeCoord",
    "Ordinal",
    "PointClass",
    "REST",
    "Sel",
    "SequenceSpec",
    "Slice",
    "Space",
    "SpaceMap",
    "StagedTree",
    "Tree",
    "ValidationError",
    "alexandroff_duplicate",
    "closed_subspace_as_ray_space",
    "compact_ray_to_path",
    "compose",
    "corpus_instance",
    "corpus_names",
    "corpus_sources",
    "dense_metrizable_core",
    "discrete",
    "family_report",
    "gen_of",
    "generate_family",
    "generate_tree",
    "ground_family",
    "hausdorff_witness",
    "hereditarily_complete",
    "is_compact",
    "laminar_to_tree",
    "lex_sum",
    "lindelof_number",
    "map_to_dot",
    "map_to_json",
    "mich_refinement_report",
    "mono_normal_operator",
    "mono_normal_scan",
    "n_resolution",
    "one_point_compactification",
    "parse_coord",
    "parse_family",
    "parse_ordinal",
    "parse_source",
    "parse_tree",
    "path_to_compact_ray",
    "print_family",
    "print_tree",
    "realize_ray_space",
    "seeded_cover",
    "shrink_tree",
    "signature_match",
    "signatures_equal",
    "space_signature",
    "space_to_dot",
    "standard_family",
    "subbase_embedding",
    "tau_seq_limit",
    "tree_from_json",
    "tree_to_dot",
    "tree_to_json",
    "ultrapartition",
    "validate",
    "verify_homeomorphism",
]
