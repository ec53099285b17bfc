"""Two-pass include resolution and the file-level include graph.

First pass: join the directive against the including file's directory,
then each include directory in turn. Second pass: for directives the first
pass missed, look the basename up in an index of scanned files and keep
requiring one more trailing path component to match until one candidate
is left.
"""

from __future__ import annotations

import enum
import os
import posixpath
from collections import Counter, defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .scanner import Delimiter, RawInclude, RepoSpec, extract_includes, read_source, scan_repo


class Resolution(str, enum.Enum):
    FIRST_PASS = "FIRST_PASS"
    SECOND_PASS = "SECOND_PASS"


class Reason(str, enum.Enum):
    NOT_FOUND = "NOT_FOUND"
    AMBIGUOUS_AFTER_SECOND_PASS = "AMBIGUOUS_AFTER_SECOND_PASS"
    MACRO = "MACRO"


@dataclass(frozen=True, order=True)
class IncludeEdge:
    source: str
    target: str
    resolution: Resolution = field(compare=False)
    directive_text: str = field(default="", compare=False)


@dataclass(frozen=True, order=True)
class UnresolvedInclude:
    including_file: str
    directive_text: str
    reason: Reason


@dataclass(frozen=True, order=True)
class Ambiguity:
    """Second-pass tie: several files matched every directive component."""

    including_file: str
    directive_text: str
    candidates: tuple[str, ...]
    chosen: str | None  # None in strict mode


@dataclass(frozen=True)
class FileIndex:
    entries: dict[str, tuple[str, ...]]

    @classmethod
    def build(cls, paths) -> "FileIndex":
        by_name = defaultdict(set)
        for p in paths:
            by_name[os.path.basename(p)].add(p)
        return cls({name: tuple(sorted(ps)) for name, ps in sorted(by_name.items())})

    def candidates(self, basename: str) -> tuple[str, ...]:
        return self.entries.get(basename, ())


def _within(path: str, root: str) -> bool:
    return path == root or path.startswith(root.rstrip(os.sep) + os.sep)


def _directive_parts(text: str) -> list[str]:
    """Directive components for trailing-component matching.

    Inner ``..`` segments are collapsed; leading ones (which point outside
    whatever base the directive was relative to) are dropped.
    """
    norm = posixpath.normpath(text.replace("\\", "/"))
    return [p for p in norm.split("/") if p not in ("", ".", "..")]


def resolve_first_pass(raw: RawInclude, repo_root, include_dirs=()):
    """Edge to the first existing file, or ``UnresolvedInclude``."""
    if raw.delimiter == Delimiter.MACRO:
        return UnresolvedInclude(raw.including_file, raw.directive_text, Reason.MACRO)
    root = os.path.abspath(os.fspath(repo_root))
    rel = raw.directive_text.replace("\\", "/")
    if not posixpath.isabs(rel):
        # the repo root is always searched; configured dirs come after it
        bases = [os.path.dirname(raw.including_file), root]
        bases += [os.path.abspath(os.path.join(root, os.fspath(d))) for d in include_dirs]
        for base in bases:
            candidate = os.path.normpath(os.path.join(base, rel))
            if _within(candidate, root) and os.path.isfile(candidate):
                return IncludeEdge(raw.including_file, candidate, Resolution.FIRST_PASS, raw.directive_text)
    return UnresolvedInclude(raw.including_file, raw.directive_text, Reason.NOT_FOUND)


def second_pass_candidates(directive_text: str, index: FileIndex) -> tuple[list[str], int]:
    """Narrow index candidates by trailing components.

    Returns the surviving candidates and how many trailing components were
    required to get there.
    """
    parts = _directive_parts(directive_text)
    if not parts:
        return [], 0
    candidates = list(index.candidates(parts[-1]))
    k = 1
    while len(candidates) > 1 and k < len(parts):
        k += 1
        want = parts[-k:]
        candidates = [c for c in candidates if c.replace(os.sep, "/").split("/")[-k:] == want]
    return candidates, k


def resolve_second_pass(unresolved: UnresolvedInclude, index: FileIndex, strict: bool = False):
    """Returns ``(result, ambiguity)``; ``ambiguity`` is None unless ≥2 files tie."""
    if unresolved.reason != Reason.NOT_FOUND:
        return unresolved, None
    candidates, _ = second_pass_candidates(unresolved.directive_text, index)
    if not candidates:
        return unresolved, None
    if len(candidates) == 1:
        edge = IncludeEdge(unresolved.including_file, candidates[0], Resolution.SECOND_PASS,
                           unresolved.directive_text)
        return edge, None
    chosen = None if strict else min(candidates)
    amb = Ambiguity(unresolved.including_file, unresolved.directive_text, tuple(sorted(candidates)), chosen)
    if strict:
        return UnresolvedInclude(unresolved.including_file, unresolved.directive_text,
                                 Reason.AMBIGUOUS_AFTER_SECOND_PASS), amb
    return IncludeEdge(unresolved.including_file, chosen, Resolution.SECOND_PASS,
                       unresolved.directive_text), amb


@dataclass
class FileGraph:
    nodes: list[str]
    edges: dict[tuple[str, str], int]  # (source, target) -> multiplicity

    def __len__(self):
        return len(self.nodes)

    def successors(self, node):
        return [t for (s, t) in self.edges if s == node]


def build_include_graph(edges, all_files) -> FileGraph:
    mult = Counter((e.source, e.target) for e in edges)
    nodes = set(all_files)
    for s, t in mult:
        nodes.add(s)
        nodes.add(t)
    return FileGraph(nodes=sorted(nodes), edges={k: mult[k] for k in sorted(mult)})


@dataclass
class ResolveResult:
    files: list[str]
    raw: list[RawInclude]
    edges: list[IncludeEdge]
    unresolved: list[UnresolvedInclude]
    ambiguities: list[Ambiguity]
    unreadable: list[str]
    graph: FileGraph

    def counts(self) -> dict[str, int]:
        by_res = Counter(e.resolution for e in self.edges)
        return {
            "files": len(self.files),
            "includes": len(self.raw),
            "edges": len(self.graph.edges),
            "first_pass": by_res[Resolution.FIRST_PASS],
            "second_pass": by_res[Resolution.SECOND_PASS],
            "ambiguous": len(self.ambiguities),
            "unresolved": len(self.unresolved),
        }


def _read_and_extract(path):
    content = read_source(path)
    if content is None:
        return path, None
    return path, extract_includes(path, content)


def resolve_repo(spec: RepoSpec, strict: bool = False, jobs: int = 1) -> ResolveResult:
    """Scan, extract and resolve a whole repository."""
    files = scan_repo(spec)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            extracted = list(pool.map(_read_and_extract, files))
    else:
        extracted = [_read_and_extract(f) for f in files]

    raw, unreadable = [], []
    for path, incs in extracted:
        if incs is None:
            unreadable.append(path)
        else:
            raw.extend(incs)

    index = FileIndex.build(files)
    edges, unresolved, ambiguities = [], [], []
    for inc in raw:
        res = resolve_first_pass(inc, spec.root, spec.include_dirs)
        if isinstance(res, UnresolvedInclude) and res.reason == Reason.NOT_FOUND:
            res, amb = resolve_second_pass(res, index, strict=strict)
            if amb is not None:
                ambiguities.append(amb)
        if isinstance(res, IncludeEdge):
            edges.append(res)
        else:
            unresolved.append(res)

    return ResolveResult(
        files=files,
        raw=raw,
        edges=edges,
        unresolved=sorted(unresolved),
        ambiguities=sorted(ambiguities),
        unreadable=unreadable,
        graph=build_include_graph(edges, files),
    )
