"""Network topology and series-parallel failure composition.

Lines connect two nodes through an ordered run of critical components;
a line fails as soon as any of its components fails, so its failure
probability composes by the series rule 1 - prod(1 - p_i). Lines that
share both endpoints act as alternatives: the connection between the
endpoints is lost only when every such line fails, the parallel rule
prod(p_i).

Connection failure probabilities between arbitrary node pairs are
computed by repeatedly applying those two rules: parallel edges between
the same pair of nodes are merged, and pass-through nodes of degree two
are contracted. Only topologies that reduce to a single edge this way
are supported; anything else (e.g. a bridge/Wheatstone arrangement)
raises an unsupported-topology error naming the irreducible remainder.
All composition assumes independent component failures, so components
shared between lines of the queried subgraph are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import UnsupportedTopologyError, ValidationError


@dataclass(frozen=True)
class Component:
    """A critical component: its failure interrupts every line carrying it."""

    id: str
    kind: str
    area_id: str
    cost_ref: str


@dataclass(frozen=True)
class Line:
    """A run of critical components in series between two nodes."""

    id: str
    from_node: str
    to_node: str
    components: tuple[str, ...]

    def __post_init__(self):
        if self.from_node == self.to_node:
            raise ValidationError(
                "line_endpoints_identical",
                f"line {self.id!r} must connect two distinct nodes, "
                f"got {self.from_node!r} twice",
            )
        if not self.components:
            raise ValidationError(
                "line_empty", f"line {self.id!r} lists no components"
            )
        if len(set(self.components)) != len(self.components):
            seen: set[str] = set()
            dup = next(c for c in self.components if c in seen or seen.add(c))
            raise ValidationError(
                "line_component_repeated",
                f"line {self.id!r} lists component {dup!r} more than once",
            )


@dataclass(frozen=True)
class Network:
    nodes: frozenset[str]
    lines: tuple[Line, ...]

    def __post_init__(self):
        for line in self.lines:
            for node in (line.from_node, line.to_node):
                if node not in self.nodes:
                    raise ValidationError(
                        "line_unknown_node",
                        f"line {line.id!r} references undeclared node {node!r}",
                    )

    def parallel_groups(self) -> list[tuple[str, ...]]:
        """Maximal sets of line ids sharing both endpoints (order-stable)."""
        groups: dict[frozenset[str], list[str]] = {}
        for line in self.lines:
            groups.setdefault(frozenset((line.from_node, line.to_node)), []).append(
                line.id
            )
        return [tuple(sorted(ids)) for ids in groups.values() if len(ids) > 1]


def _check_probabilities(pfs: list[float]) -> None:
    if not pfs:
        raise ValidationError(
            "empty_probability_list", "need at least one failure probability"
        )
    for i, p in enumerate(pfs):
        if not 0.0 <= p <= 1.0:
            raise ValidationError(
                "probability_out_of_range",
                f"failure probability at index {i} must be in [0, 1], got {p!r}",
            )


def series_failure_probability(pfs: list[float]) -> float:
    """Failure probability of a series system: any component failing fails it."""
    _check_probabilities(pfs)
    if len(pfs) == 1:
        return float(pfs[0])
    survival = 1.0
    for p in pfs:
        survival *= 1.0 - p
    return 1.0 - survival


def parallel_failure_probability(pfs: list[float]) -> float:
    """Failure probability of parallel alternatives: all must fail."""
    _check_probabilities(pfs)
    result = 1.0
    for p in pfs:
        result *= p
    return result


@dataclass
class _Edge:
    a: str
    b: str
    pf: float
    line_ids: frozenset[str] = field(default_factory=frozenset)

    @property
    def pair(self) -> frozenset[str]:
        return frozenset((self.a, self.b))


def connection_failure_probability(
    net: Network,
    from_node: str,
    to_node: str,
    per_component_pf: dict[str, float],
) -> float:
    """Probability that no intact route remains between two nodes.

    Each line's failure probability is the series composition of its
    components' probabilities; the line graph between the nodes is then
    reduced with the parallel and series rules. If no route exists at
    all the connection is failed with certainty and 1.0 is returned.
    """
    for node in (from_node, to_node):
        if node not in net.nodes:
            raise ValidationError(
                "unknown_node", f"node {node!r} is not part of the network"
            )
    if from_node == to_node:
        raise ValidationError(
            "identical_nodes", "connection query needs two distinct nodes"
        )

    edges = _relevant_edges(net, from_node, to_node, per_component_pf)
    if not edges:
        return 1.0

    while True:
        if len(edges) == 1 and edges[0].pair == frozenset((from_node, to_node)):
            return edges[0].pf
        pruned = _prune_dead_ends(edges, from_node, to_node)
        merged = _merge_parallel(pruned)
        contracted = _contract_series(merged, from_node, to_node)
        if contracted is merged and merged is pruned and pruned is edges:
            remaining_nodes = sorted({n for e in edges for n in (e.a, e.b)})
            remaining_lines = sorted({lid for e in edges for lid in e.line_ids})
            raise UnsupportedTopologyError(
                "unsupported_topology",
                f"sub-network between {from_node!r} and {to_node!r} is not "
                f"series-parallel reducible; irreducible subgraph has nodes "
                f"{remaining_nodes} over lines {remaining_lines}",
            )
        edges = contracted


def _relevant_edges(
    net: Network,
    from_node: str,
    to_node: str,
    per_component_pf: dict[str, float],
) -> list[_Edge]:
    """Lines in the pruned connected subgraph that can carry the connection."""
    adjacency: dict[str, list[Line]] = {}
    for line in net.lines:
        adjacency.setdefault(line.from_node, []).append(line)
        adjacency.setdefault(line.to_node, []).append(line)

    # Restrict to the component of the graph containing from_node.
    reachable = {from_node}
    frontier = [from_node]
    while frontier:
        node = frontier.pop()
        for line in adjacency.get(node, ()):
            other = line.to_node if line.from_node == node else line.from_node
            if other not in reachable:
                reachable.add(other)
                frontier.append(other)
    if to_node not in reachable:
        return []

    lines = [
        l
        for l in net.lines
        if l.from_node in reachable and l.to_node in reachable
    ]

    # Dead-end branches cannot carry the connection; prune them.
    while True:
        degree: dict[str, int] = {}
        for line in lines:
            degree[line.from_node] = degree.get(line.from_node, 0) + 1
            degree[line.to_node] = degree.get(line.to_node, 0) + 1
        removable = {
            node
            for node, d in degree.items()
            if d <= 1 and node not in (from_node, to_node)
        }
        if not removable:
            break
        lines = [
            l
            for l in lines
            if l.from_node not in removable and l.to_node not in removable
        ]

    seen_components: dict[str, str] = {}
    for line in lines:
        for cid in line.components:
            if cid in seen_components and seen_components[cid] != line.id:
                raise ValidationError(
                    "shared_component",
                    f"component {cid!r} appears on lines "
                    f"{seen_components[cid]!r} and {line.id!r}; the "
                    f"series/parallel rules require independent lines",
                )
            seen_components[cid] = line.id

    edges = []
    for line in lines:
        pfs = []
        for cid in line.components:
            if cid not in per_component_pf:
                raise ValidationError(
                    "missing_component_probability",
                    f"no failure probability supplied for component {cid!r} "
                    f"on line {line.id!r}",
                )
            pfs.append(per_component_pf[cid])
        edges.append(
            _Edge(
                a=line.from_node,
                b=line.to_node,
                pf=series_failure_probability(pfs),
                line_ids=frozenset((line.id,)),
            )
        )
    return edges


def _prune_dead_ends(
    edges: list[_Edge], from_node: str, to_node: str
) -> list[_Edge]:
    """Drop edges hanging off degree-one nodes (collapsed side branches)."""
    current = edges
    while True:
        degree: dict[str, int] = {}
        for edge in current:
            degree[edge.a] = degree.get(edge.a, 0) + 1
            degree[edge.b] = degree.get(edge.b, 0) + 1
        removable = {
            node
            for node, d in degree.items()
            if d <= 1 and node not in (from_node, to_node)
        }
        if not removable:
            return current
        current = [
            e for e in current if e.a not in removable and e.b not in removable
        ]


def _merge_parallel(edges: list[_Edge]) -> list[_Edge]:
    groups: dict[frozenset[str], list[_Edge]] = {}
    order: list[frozenset[str]] = []
    for edge in edges:
        if edge.pair not in groups:
            order.append(edge.pair)
        groups.setdefault(edge.pair, []).append(edge)
    if all(len(g) == 1 for g in groups.values()):
        return edges
    merged = []
    for pair in order:
        group = groups[pair]
        if len(group) == 1:
            merged.append(group[0])
        else:
            merged.append(
                _Edge(
                    a=group[0].a,
                    b=group[0].b,
                    pf=parallel_failure_probability([e.pf for e in group]),
                    line_ids=frozenset().union(*(e.line_ids for e in group)),
                )
            )
    return merged


def _contract_series(
    edges: list[_Edge], from_node: str, to_node: str
) -> list[_Edge]:
    incident: dict[str, list[_Edge]] = {}
    for edge in edges:
        incident.setdefault(edge.a, []).append(edge)
        incident.setdefault(edge.b, []).append(edge)
    for node, pair in incident.items():
        if node in (from_node, to_node) or len(pair) != 2:
            continue
        e1, e2 = pair
        other1 = e1.b if e1.a == node else e1.a
        other2 = e2.b if e2.a == node else e2.a
        if other1 == other2:
            continue  # would form a parallel pair; merged on the next pass
        combined = _Edge(
            a=other1,
            b=other2,
            pf=series_failure_probability([e1.pf, e2.pf]),
            line_ids=e1.line_ids | e2.line_ids,
        )
        return [e for e in edges if e is not e1 and e is not e2] + [combined]
    return edges
