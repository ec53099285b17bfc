"""Input checks shared by the estimators."""

from __future__ import annotations

import numbers
import os

from .metrics import SubsystemGraph
from .scanner import RepoSpec, check_root


def check_positive_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_repo(X, **spec_kwargs) -> RepoSpec:
    """Accept a RepoSpec or a directory path; return a RepoSpec with a checked root."""
    if isinstance(X, RepoSpec):
        spec = X
    elif isinstance(X, (str, os.PathLike)):
        root = os.path.abspath(os.fspath(X))
        spec = RepoSpec(name=os.path.basename(root) or "repo", root=root, **spec_kwargs)
    else:
        raise TypeError(f"expected a repository path or RepoSpec, got {type(X).__name__}")
    check_root(spec.root)
    return spec


def check_subsystem_graphs(graphs) -> list[SubsystemGraph]:
    if isinstance(graphs, SubsystemGraph):
        graphs = [graphs]
    graphs = list(graphs)
    if not graphs:
        raise ValueError("need at least one SubsystemGraph")
    for g in graphs:
        if not isinstance(g, SubsystemGraph):
            raise TypeError(f"expected SubsystemGraph, got {type(g).__name__}")
    names = [g.engine for g in graphs]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise ValueError(f"duplicate engine names: {', '.join(dupes)}")
    return graphs

