"""Estimator front-end over the pipeline stages.

Each class follows the scikit-learn contract (constructor stores params
only, ``fit`` returns ``self``, learned state ends in ``_``), so instances
support ``get_params``/``set_params``/``clone``.

Typical use::

    ext = IncludeGraphExtractor(exclude_dirs=("thirdparty",)).fit("/src/godot")
    tagger = SubsystemTagger("godot.csv", repo_root="/src/godot").fit()
    model = EngineModel(engine="godot").fit(ext.graph_, tagger.transform(ext.graph_.nodes))
    corpus = CouplingAnalyzer(pair_threshold=6).fit([model.graph_, ...])
    corpus.architecture_.inner_core
"""

from __future__ import annotations

import os

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_positive_int, check_repo, check_subsystem_graphs
from .aggregate import aggregate_heatmap, derive_emergent_architecture, frequent_pairs
from .metrics import (
    AveragingMode,
    Metric,
    MetricsReport,
    average_metric,
    build_subsystem_graph,
)
from .resolver import (
    FileIndex,
    Reason,
    UnresolvedInclude,
    resolve_first_pass,
    resolve_repo,
    resolve_second_pass,
)
from .scanner import DEFAULT_EXTENSIONS
from .subsystems import SubsystemMapping, assign_subsystem, load_mapping


class IncludeGraphExtractor(BaseEstimator):
    """Scan a repository and resolve its includes into a file graph.

    ``fit`` takes a repository root (or a ``RepoSpec``); ``transform``
    resolves further ``RawInclude`` records against the fitted file index,
    returning one ``IncludeEdge`` or ``UnresolvedInclude`` per record.
    """

    def __init__(self, extensions=tuple(sorted(DEFAULT_EXTENSIONS)), exclude_dirs=(),
                 include_dirs=(), strict_resolve=False, n_jobs=1):
        self.extensions = extensions
        self.exclude_dirs = exclude_dirs
        self.include_dirs = include_dirs
        self.strict_resolve = strict_resolve
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        n_jobs = check_positive_int(self.n_jobs, "n_jobs")
        self.repo_ = check_repo(
            X,
            extensions=frozenset(self.extensions),
            exclude_dirs=frozenset(self.exclude_dirs),
            include_dirs=tuple(self.include_dirs),
        )
        result = resolve_repo(self.repo_, strict=self.strict_resolve, jobs=n_jobs)
        self.result_ = result
        self.files_ = result.files
        self.index_ = FileIndex.build(result.files)
        self.edges_ = result.edges
        self.unresolved_ = result.unresolved
        self.ambiguities_ = result.ambiguities
        self.graph_ = result.graph
        return self

    def transform(self, X):
        check_is_fitted(self, "index_")
        out = []
        for raw in X:
            res = resolve_first_pass(raw, self.repo_.root, self.repo_.include_dirs)
            if isinstance(res, UnresolvedInclude) and res.reason == Reason.NOT_FOUND:
                res, _ = resolve_second_pass(res, self.index_, strict=self.strict_resolve)
            out.append(res)
        return out


class SubsystemTagger(TransformerMixin, BaseEstimator):
    """Map file paths to subsystem codes through a folder mapping.

    ``mapping`` is a mapping file path or a ``SubsystemMapping``.
    """

    def __init__(self, mapping=None, repo_root=None):
        self.mapping = mapping
        self.repo_root = repo_root

    def fit(self, X=None, y=None):
        if self.repo_root is None:
            raise ValueError("repo_root is required")
        if isinstance(self.mapping, SubsystemMapping):
            self.mapping_ = self.mapping
        elif self.mapping is None:
            self.mapping_ = SubsystemMapping()
        else:
            self.mapping_ = load_mapping(self.mapping)
        self.root_ = os.path.abspath(os.fspath(self.repo_root))
        return self

    def transform(self, X):
        """Codes for each path in ``X`` (UNASSIGNED where nothing matches)."""
        check_is_fitted(self, "mapping_")
        return [assign_subsystem(p, self.root_, self.mapping_) for p in X]


class EngineModel(BaseEstimator):
    """One engine's subsystem graph and metrics.

    ``fit(file_graph, tags)`` where ``tags`` lists one code per
    ``file_graph.nodes`` entry (as returned by ``SubsystemTagger``) or is a
    path -> code dict.
    """

    def __init__(self, engine="engine", include_unassigned=False, normalize=False):
        self.engine = engine
        self.include_unassigned = include_unassigned
        self.normalize = normalize

    def fit(self, X, y=None):
        file_graph, tags = X, y
        if tags is None:
            raise ValueError("EngineModel.fit needs the file tags as its second argument")
        if not isinstance(tags, dict):
            tags = list(tags)
            if len(tags) != len(file_graph.nodes):
                raise ValueError(f"got {len(tags)} tags for {len(file_graph.nodes)} file nodes")
            tags = dict(zip(file_graph.nodes, tags))
        self.graph_ = build_subsystem_graph(self.engine, file_graph, tags, self.include_unassigned)
        self.report_ = MetricsReport.from_graph(self.graph_, normalize=self.normalize)
        return self


class CouplingAnalyzer(BaseEstimator):
    """Cross-engine aggregation: heatmap, frequent pairs, emergent tiers.

    After ``fit(graphs)``:

    - ``matrix_``: CouplingMatrix (engine counts per ordered code pair)
    - ``in_degree_ranking_`` / ``centrality_ranking_``: averaged metrics,
      descending
    - ``pairs_``: FrequentPair list
    - ``architecture_``: EmergentArchitecture

    ``predict(codes)`` returns the tier name of each code.
    """

    def __init__(self, pair_threshold=6, inner_core_size=4, averaging="present_only", normalize=False):
        self.pair_threshold = pair_threshold
        self.inner_core_size = inner_core_size
        self.averaging = averaging
        self.normalize = normalize

    def fit(self, X, y=None):
        graphs = check_subsystem_graphs(X)
        threshold = check_positive_int(self.pair_threshold, "pair_threshold")
        core = check_positive_int(self.inner_core_size, "inner_core_size")
        mode = AveragingMode(self.averaging)

        self.reports_ = sorted((MetricsReport.from_graph(g, self.normalize) for g in graphs),
                               key=lambda r: r.engine)
        self.matrix_ = aggregate_heatmap(graphs)
        self.in_degree_ranking_ = average_metric(self.reports_, Metric.IN_DEGREE, mode)
        self.centrality_ranking_ = average_metric(self.reports_, Metric.BETWEENNESS, mode)
        centrality = dict(self.centrality_ranking_)
        self.pairs_ = frequent_pairs(self.matrix_, threshold, centrality)
        self.architecture_ = derive_emergent_architecture(self.pairs_, centrality, core)
        return self

    def predict(self, X):
        check_is_fitted(self, "architecture_")
        return [self.architecture_.tier_of(code) for code in X]
