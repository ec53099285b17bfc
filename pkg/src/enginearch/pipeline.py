"""Pipeline stages that read configuration and write artifacts.

Each stage writes plain files into the output directory so the next stage
(or a person) can pick them up: ``scan`` -> include DOT + unresolved CSV,
``analyse`` -> subsystem DOT + metrics CSV, ``aggregate`` -> corpus
heatmap, pairs and architecture.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import emit
from .config import CorpusConfig, Options
from .errors import ConfigurationError
from .estimators import CouplingAnalyzer, EngineModel, SubsystemTagger
from .resolver import ResolveResult, resolve_repo
from .scanner import RepoSpec, check_root, scan_repo
from .subsystems import UNASSIGNED, TaggedFile, mapping_coverage, relative_to_root, suggest_mapping

log = logging.getLogger(__name__)


@dataclass
class ScanSummary:
    engine: str
    counts: dict
    paths: list = field(default_factory=list)


@dataclass
class AnalyseSummary:
    engine: str
    scan: ScanSummary
    nodes: list
    n_edges: int
    coverage: float
    unassigned: int
    paths: list = field(default_factory=list)


@dataclass
class AggregateSummary:
    engines: list
    inner_core: tuple
    outer_core: tuple
    periphery: tuple
    n_pairs: int
    paths: list = field(default_factory=list)
    analyzer: CouplingAnalyzer | None = None


def _write_scan(spec: RepoSpec, result: ResolveResult, out_dir: Path) -> ScanSummary:
    paths = [
        emit.write_text(out_dir / emit.artifact_name(spec.name, "includes"), emit.file_graph_dot(result.graph)),
        emit.write_text(out_dir / emit.artifact_name(spec.name, "unresolved"),
                        emit.unresolved_csv(result.unresolved)),
        emit.write_text(out_dir / emit.artifact_name(spec.name, "ambiguous"),
                        emit.ambiguity_csv(result.ambiguities)),
    ]
    for path in result.unreadable:
        log.warning("%s: unreadable file skipped: %s", spec.name, path)
    return ScanSummary(spec.name, result.counts(), paths)


def run_scan(spec: RepoSpec, out_dir, options: Options, jobs: int = 1) -> ScanSummary:
    result = resolve_repo(spec, strict=options.strict_resolve, jobs=jobs)
    return _write_scan(spec, result, Path(out_dir))


def run_analyse(spec: RepoSpec, out_dir, options: Options, jobs: int = 1) -> AnalyseSummary:
    if not spec.mapping_file:
        raise ConfigurationError(f"{spec.name}: no mapping file configured")
    check_root(spec.root)
    tagger = SubsystemTagger(spec.mapping_file, repo_root=spec.root).fit()
    out_dir = Path(out_dir)
    result = resolve_repo(spec, strict=options.strict_resolve, jobs=jobs)
    scan = _write_scan(spec, result, out_dir)

    nodes = result.graph.nodes
    tags = tagger.transform(nodes)
    coverage = mapping_coverage([TaggedFile(p, c) for p, c in zip(nodes, tags)])
    if coverage.total and coverage.unassigned == coverage.total:
        log.warning("%s: mapping covers none of the %d files", spec.name, coverage.total)

    model = EngineModel(engine=spec.name, include_unassigned=options.include_unassigned,
                        normalize=options.normalize_centrality).fit(result.graph, tags)
    graph, report = model.graph_, model.report_
    paths = [
        emit.write_text(out_dir / emit.artifact_name(spec.name, "subsystems"), emit.subsystem_graph_dot(graph)),
        emit.write_text(out_dir / emit.artifact_name(spec.name, "metrics"), emit.metrics_csv(report, graph.nodes)),
    ]
    return AnalyseSummary(spec.name, scan, graph.nodes, len(graph.edges), coverage.coverage,
                          coverage.unassigned, paths)


def run_aggregate(config: CorpusConfig, out_dir, options: Options) -> AggregateSummary:
    out_dir = Path(out_dir)
    graphs = []
    for spec in sorted(config.repos, key=lambda r: r.name):
        path = out_dir / emit.artifact_name(spec.name, "subsystems")
        if not path.is_file():
            log.warning("%s: not analysed yet (no %s), skipped", spec.name, path.name)
            continue
        graph = emit.read_subsystem_graph(path, spec.name)
        # UNASSIGNED pseudo-nodes never enter the corpus view
        graph.nodes = [n for n in graph.nodes if n != UNASSIGNED]
        graph.edges = {k: w for k, w in graph.edges.items() if UNASSIGNED not in k}
        graphs.append(graph)
    if not graphs:
        raise ConfigurationError(f"no analysed engines found in {out_dir}")

    analyzer = CouplingAnalyzer(
        pair_threshold=options.pair_threshold,
        inner_core_size=options.inner_core_size,
        averaging=options.averaging.value,
        normalize=options.normalize_centrality,
    ).fit(graphs)
    arch = analyzer.architecture_
    files = emit.CORPUS_FILES
    paths = [
        emit.write_text(out_dir / files["heatmap_csv"], emit.heatmap_csv(analyzer.matrix_)),
        emit.write_text(out_dir / files["heatmap_svg"], emit.heatmap_svg(analyzer.matrix_)),
        emit.write_text(out_dir / files["pairs"], emit.pairs_csv(analyzer.pairs_)),
        emit.write_text(out_dir / files["architecture_svg"], emit.architecture_svg(arch)),
        emit.write_text(out_dir / files["architecture_txt"], emit.architecture_text(arch)),
    ]
    return AggregateSummary([g.engine for g in graphs], arch.inner_core, arch.outer_core,
                            arch.periphery, len(analyzer.pairs_), paths, analyzer)


def run_engines(stage, specs, out_dir, options: Options, jobs: int = 1) -> list:
    """Run a per-engine stage over ``specs``; results come back sorted by engine name."""
    specs = sorted(specs, key=lambda r: r.name)
    if jobs > 1 and len(specs) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(lambda s: stage(s, out_dir, options), specs))
    return [stage(s, out_dir, options) for s in specs]


def suggestions_for(spec: RepoSpec) -> list[tuple[str, str]]:
    """Advisory name-based mapping rows for every folder holding scanned files."""
    folders = set()
    for path in scan_repo(spec):
        rel = relative_to_root(os.path.dirname(path), spec.root)
        parts = [] if rel == "." else rel.split("/")
        for n in range(1, len(parts) + 1):
            folders.add("/".join(parts[:n]))
    # deepest suggestion wins anyway, so drop ones that repeat their parent's code
    rows = suggest_mapping(folders)
    code_of = dict(rows)
    out = []
    for folder, code in rows:
        parent = folder.rsplit("/", 1)[0] if "/" in folder else None
        inherited = None
        while parent:
            if parent in code_of:
                inherited = code_of[parent]
                break
            parent = parent.rsplit("/", 1)[0] if "/" in parent else None
        if inherited != code:
            out.append((folder, code))
    return out
