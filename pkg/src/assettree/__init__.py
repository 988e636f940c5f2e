"""Correlation-based minimal spanning tree analytics for equity panels.

Pipeline: price table -> aligned panel -> log returns -> Pearson
correlation -> distances -> minimum spanning tree -> degree statistics,
tree-compactness metrics, and phase labels, optionally over rolling
windows with a transition report.
"""

from .correlation import CorrelationMatrix, DistanceMatrix, pearson_matrix, to_distance
from .errors import (
    AssetTreeError,
    ConfigurationError,
    DegenerateSeriesError,
    DuplicateRecordError,
    FormatError,
    InsufficientDataError,
    MissingVertexError,
    SizeLimitError,
    UnderdeterminedFitError,
)
from .ingestion import (
    AlignResult,
    FormatSpec,
    ParseResult,
    PricePanel,
    PriceSeries,
    ReturnPanel,
    align_and_filter,
    log_returns,
    parse_price_table,
)
from .metrics import (
    DegreeDistribution,
    PhaseLabel,
    PowerLawFit,
    SuperhubReport,
    PHASE_MULTI_HUB,
    PHASE_POWER_LAW,
    PHASE_SUPERHUB,
    classify_phase,
    degree_distribution,
    detect_superhub,
    fit_power_law,
    max_degree_vertex,
    mean_occupation_layer,
    normalized_tree_length,
)
from .mst import Tree, UnionFind, brute_force_mst, check_tree, kruskal_mst, prim_mst
from .rolling import (
    MetricSeries,
    TransitionReport,
    WindowSpec,
    detect_transitions,
    evolve,
    windows,
)
from .synth import (
    FactorModelParams,
    HubRegimeParams,
    hub_regime_returns,
    one_factor_returns,
    preferential_attachment_tree,
)

__version__ = "0.1.0"
