"""Include-graph based architecture recovery for C/C++ game engines."""

from .aggregate import (
    CouplingMatrix,
    EmergentArchitecture,
    FrequentPair,
    aggregate_heatmap,
    derive_emergent_architecture,
    frequent_pairs,
)
from .errors import ConfigurationError
from .estimators import CouplingAnalyzer, EngineModel, IncludeGraphExtractor, SubsystemTagger
from .metrics import (
    AveragingMode,
    Metric,
    MetricsReport,
    SubsystemGraph,
    average_metric,
    betweenness,
    build_subsystem_graph,
    in_degree,
    out_degree,
)
from .resolver import (
    FileGraph,
    FileIndex,
    IncludeEdge,
    Reason,
    Resolution,
    UnresolvedInclude,
    build_include_graph,
    resolve_first_pass,
    resolve_repo,
    resolve_second_pass,
)
from .scanner import Delimiter, RawInclude, RepoSpec, extract_includes, scan_repo
from .subsystems import CODES, SUBSYSTEMS, UNASSIGNED, SubsystemMapping, assign_subsystem, load_mapping

__version__ = "0.1.0"
