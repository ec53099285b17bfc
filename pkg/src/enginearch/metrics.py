"""Per-engine subsystem graphs and their degree / betweenness metrics."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field

from .subsystems import UNASSIGNED, code_rank


class Metric(str, enum.Enum):
    IN_DEGREE = "in_degree"
    BETWEENNESS = "betweenness"


class AveragingMode(str, enum.Enum):
    PRESENT_ONLY = "present_only"
    ZERO_FILL = "zero_fill"


def canonical_sorted(codes):
    return sorted(codes, key=lambda c: (code_rank(c), c))


@dataclass
class SubsystemGraph:
    engine: str
    nodes: list[str]
    edges: dict[tuple[str, str], int] = field(default_factory=dict)

    def __post_init__(self):
        self.nodes = canonical_sorted(set(self.nodes))
        node_set = set(self.nodes)
        for (a, b), w in self.edges.items():
            if a not in node_set or b not in node_set:
                raise ValueError(f"{self.engine}: edge {a}->{b} has an endpoint outside the node set")
            if w < 1:
                raise ValueError(f"{self.engine}: edge {a}->{b} has weight {w} < 1")
        self.edges = {
            k: self.edges[k]
            for k in sorted(self.edges, key=lambda e: (code_rank(e[0]), e[0], code_rank(e[1]), e[1]))
        }

    def adjacency(self) -> dict[str, list[str]]:
        """Successor lists without self-loops, in canonical order."""
        adj = {v: [] for v in self.nodes}
        for a, b in self.edges:
            if a != b:
                adj[a].append(b)
        return adj


def build_subsystem_graph(engine: str, file_graph, tags: dict[str, str],
                          include_unassigned: bool = False) -> SubsystemGraph:
    """Lift a file graph onto subsystem codes.

    ``tags`` maps every file node to a code (or UNASSIGNED). An edge A->B
    is weighted by the number of distinct file pairs behind it.
    """
    def keep(code):
        return include_unassigned or code != UNASSIGNED

    nodes = {code for code in (tags.get(n, UNASSIGNED) for n in file_graph.nodes) if keep(code)}
    edges: dict[tuple[str, str], int] = {}
    for (src, dst) in file_graph.edges:
        a, b = tags.get(src, UNASSIGNED), tags.get(dst, UNASSIGNED)
        if keep(a) and keep(b):
            edges[(a, b)] = edges.get((a, b), 0) + 1
    return SubsystemGraph(engine, sorted(nodes), edges)


def in_degree(graph: SubsystemGraph) -> dict[str, int]:
    """Distinct predecessor subsystems, self-loops excluded."""
    deg = dict.fromkeys(graph.nodes, 0)
    for a, b in graph.edges:
        if a != b:
            deg[b] += 1
    return deg


def out_degree(graph: SubsystemGraph) -> dict[str, int]:
    deg = dict.fromkeys(graph.nodes, 0)
    for a, b in graph.edges:
        if a != b:
            deg[a] += 1
    return deg


def betweenness(graph: SubsystemGraph, normalize: bool = False) -> dict[str, float]:
    """Directed, unweighted betweenness centrality (Brandes accumulation).

    Edge weights are ignored for path lengths. With ``normalize`` the
    scores are divided by (n-1)(n-2).
    """
    adj = graph.adjacency()
    bc = dict.fromkeys(graph.nodes, 0.0)
    for s in graph.nodes:
        stack = []
        preds = {v: [] for v in graph.nodes}
        sigma = dict.fromkeys(graph.nodes, 0)
        dist = dict.fromkeys(graph.nodes, -1)
        sigma[s], dist[s] = 1, 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = dict.fromkeys(graph.nodes, 0.0)
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
    n = len(graph.nodes)
    if normalize and n > 2:
        scale = 1.0 / ((n - 1) * (n - 2))
        bc = {v: x * scale for v, x in bc.items()}
    return bc


@dataclass(frozen=True)
class MetricsReport:
    engine: str
    in_degree: dict
    out_degree: dict
    betweenness: dict

    @classmethod
    def from_graph(cls, graph: SubsystemGraph, normalize: bool = False) -> "MetricsReport":
        return cls(graph.engine, in_degree(graph), out_degree(graph), betweenness(graph, normalize))

    def get(self, metric: Metric) -> dict:
        return self.in_degree if Metric(metric) == Metric.IN_DEGREE else self.betweenness


def average_metric(reports, metric, mode=AveragingMode.PRESENT_ONLY) -> list[tuple[str, float]]:
    """Per-code averages across engines, sorted descending.

    PRESENT_ONLY divides by the number of engines where the code is a node;
    ZERO_FILL divides by the number of engines. Codes absent everywhere are
    left out. Ties fall back to canonical code order.
    """
    try:
        metric = Metric(metric)
    except ValueError:
        raise ValueError(f"unknown metric {metric!r}") from None
    mode = AveragingMode(mode)
    # fixed summation order keeps float results independent of input order
    reports = sorted(reports, key=lambda r: r.engine)
    if not reports:
        raise ValueError("average_metric needs at least one report")
    totals: dict[str, float] = {}
    present: dict[str, int] = {}
    for rep in reports:
        for code, value in rep.get(metric).items():
            totals[code] = totals.get(code, 0.0) + value
            present[code] = present.get(code, 0) + 1
    denom = (lambda c: present[c]) if mode == AveragingMode.PRESENT_ONLY else (lambda c: len(reports))
    averages = [(code, totals[code] / denom(code)) for code in totals]
    averages.sort(key=lambda cv: (-cv[1], code_rank(cv[0]), cv[0]))
    return averages
