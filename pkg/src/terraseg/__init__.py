"""terraseg: segment territorial entities into policy-relevant categories.

The pipeline: min-max normalize attributes to 0-100, complement the
favourable-low ones, cluster on squared Euclidean distances with an
agglomerative merge tree, cut the tree into groups, map groups onto a
category taxonomy with an auditable specialist-override ledger, score the
separation with a weighted-norm indicator, and report per-category
statistics, charts, and policy suitability.
"""

__version__ = "0.1.0"

from .cluster import DistanceMatrix, MergeTree, agglomerate, cophenetic_heights, pairwise_distances
from .dataset import Dataset, EntityRecord, export_dataset, parse_dataset, validate_dataset
from .normalize import NormalizedMatrix, apply_direction_complement, minmax_normalize
from .schema import AttributeDef, AttributeSchema, default_schema
from .stats import boxplot_stats, category_means, compare_entities, radial_profile
from .suitability import SuitabilityMatrix, load_suitability, suitability_lookup
from .taxonomy import (
    Cut,
    IndicatorConfig,
    IndicatorResult,
    OverrideEntry,
    TaxonomyState,
    apply_override,
    assign_taxonomy,
    cut_tree,
    default_weights,
    nl2,
    partition_report,
    taxonomy_from_labels,
)

__all__ = [
    "__version__",
    "AttributeDef",
    "AttributeSchema",
    "Cut",
    "Dataset",
    "DistanceMatrix",
    "EntityRecord",
    "IndicatorConfig",
    "IndicatorResult",
    "MergeTree",
    "NormalizedMatrix",
    "OverrideEntry",
    "SuitabilityMatrix",
    "TaxonomyState",
    "agglomerate",
    "apply_direction_complement",
    "apply_override",
    "assign_taxonomy",
    "boxplot_stats",
    "category_means",
    "compare_entities",
    "cophenetic_heights",
    "cut_tree",
    "default_schema",
    "default_weights",
    "export_dataset",
    "load_suitability",
    "minmax_normalize",
    "nl2",
    "pairwise_distances",
    "parse_dataset",
    "partition_report",
    "radial_profile",
    "suitability_lookup",
    "taxonomy_from_labels",
    "validate_dataset",
]
