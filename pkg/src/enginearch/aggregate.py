"""Cross-engine coupling heatmap, frequent pairs and tiering."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .subsystems import CODES, code_rank

_INDEX = {c: i for i, c in enumerate(CODES)}


@dataclass
class CouplingMatrix:
    counts: np.ndarray  # (16, 16) int, row = including, column = included
    n_engines: int
    order: tuple = CODES

    def __getitem__(self, pair):
        a, b = pair
        return int(self.counts[_INDEX[a], _INDEX[b]])

    def __eq__(self, other):
        return (
            isinstance(other, CouplingMatrix)
            and self.n_engines == other.n_engines
            and np.array_equal(self.counts, other.counts)
        )


@dataclass(frozen=True)
class FrequentPair:
    source: str
    target: str
    count: int
    centrality_sum: float


@dataclass(frozen=True)
class EmergentArchitecture:
    inner_core: tuple
    outer_core: tuple
    periphery: tuple
    edges: tuple

    def tier_of(self, code: str) -> str:
        if code in self.inner_core:
            return "inner_core"
        if code in self.outer_core:
            return "outer_core"
        if code in self.periphery:
            return "periphery"
        raise KeyError(code)


def aggregate_heatmap(graphs) -> CouplingMatrix:
    """Count, for every ordered code pair, the engines having that edge.

    Presence only; weights and non-canonical nodes (UNASSIGNED) are ignored.
    """
    graphs = list(graphs)
    if not graphs:
        raise ValueError("aggregate_heatmap needs at least one subsystem graph")
    names = [g.engine for g in graphs]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise ValueError(f"duplicate engine names: {', '.join(dupes)}")
    counts = np.zeros((len(CODES), len(CODES)), dtype=np.int64)
    for g in graphs:
        for a, b in g.edges:
            if a in _INDEX and b in _INDEX:
                counts[_INDEX[a], _INDEX[b]] += 1
    return CouplingMatrix(counts=counts, n_engines=len(graphs))


def frequent_pairs(matrix: CouplingMatrix, threshold: int = 6, centrality=None) -> list[FrequentPair]:
    """Off-diagonal cells with count >= ``threshold``.

    Sorted by count, then by the summed average betweenness of both ends
    (both descending), then canonical (source, target) order.
    """
    if threshold < 1:
        raise ValueError(f"threshold must be >= 1, got {threshold}")
    centrality = dict(centrality or {})
    pairs = []
    for i, j in zip(*np.nonzero(matrix.counts >= threshold)):
        if i == j:
            continue
        a, b = CODES[i], CODES[j]
        pairs.append(FrequentPair(a, b, int(matrix.counts[i, j]),
                                  centrality.get(a, 0.0) + centrality.get(b, 0.0)))
    pairs.sort(key=lambda p: (-p.count, -p.centrality_sum, code_rank(p.source), code_rank(p.target)))
    return pairs


def derive_emergent_architecture(pairs, centrality, inner_core_size: int = 4) -> EmergentArchitecture:
    """Three tiers from centrality and frequent pairs.

    Inner core: the ``inner_core_size`` codes with the highest average
    betweenness, in rank order. Outer core: the remaining codes that take
    part in a frequent pair. Periphery: everything else.
    """
    if inner_core_size < 1:
        raise ValueError(f"inner_core_size must be >= 1, got {inner_core_size}")
    centrality = {c: v for c, v in dict(centrality).items() if c in _INDEX}
    pairs = tuple(pairs)
    missing = sorted({c for p in pairs for c in (p.source, p.target)} - set(centrality), key=code_rank)
    if missing:
        raise ValueError(f"centrality map has no value for {', '.join(missing)}")
    ranked = sorted(centrality, key=lambda c: (-centrality[c], code_rank(c)))
    inner = tuple(ranked[:inner_core_size])
    in_pairs = {c for p in pairs for c in (p.source, p.target)}
    outer = tuple(c for c in CODES if c in in_pairs and c not in inner)
    periphery = tuple(c for c in CODES if c not in inner and c not in outer)
    return EmergentArchitecture(inner, outer, periphery, pairs)
