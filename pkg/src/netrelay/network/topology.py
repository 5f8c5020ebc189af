"""Relay network descriptions and the built-in topologies."""

from __future__ import annotations

from collections import Counter, deque
from enum import Enum
from graphlib import CycleError, TopologicalSorter
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import ConfigurationError, ParameterError
from ..logger import get_logger
from .channel import effective_crossover

logger = get_logger(__name__)


class NodeRole(str, Enum):
    """What a node does with the words it receives."""

    SOURCE = "source"
    FORWARD = "forward"
    XOR = "xor"
    DESTINATION = "destination"


_REQUIRED_INPUTS = {NodeRole.SOURCE: 0, NodeRole.FORWARD: 1, NodeRole.XOR: 2}


class Node(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int
    role: NodeRole


class Link(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    source: int = Field(alias="from")
    target: int = Field(alias="to")
    p: float = Field(ge=0.0, lt=0.5, description="Crossover probability of the link.")

    @property
    def id(self) -> str:
        return f"{self.source}->{self.target}"


class NetworkTopology(BaseModel):
    """Acyclic network of BSC links between source, relay and destination nodes.

    ``source_assignments`` maps every link leaving a source to the label of
    the codeword it carries; links with the same label carry the same word.
    ``destination_taps`` lists, per destination, the incoming links it reads.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    nodes: list[Node]
    links: list[Link]
    source_assignments: dict[str, str]
    destination_taps: dict[int, list[str]]

    @model_validator(mode="after")
    def _check_structure(self) -> "NetworkTopology":
        roles = {node.id: node.role for node in self.nodes}
        if len(roles) != len(self.nodes):
            raise ValueError("node ids must be unique")
        ids = [link.id for link in self.links]
        if len(set(ids)) != len(ids):
            raise ValueError("parallel links between the same node pair are not supported")
        for link in self.links:
            if link.source not in roles or link.target not in roles:
                raise ValueError(f"link {link.id} references an unknown node")
            if roles[link.source] is NodeRole.DESTINATION:
                raise ValueError(f"destination node {link.source} cannot transmit (link {link.id})")

        sorter = TopologicalSorter({node: [] for node in roles})
        for link in self.links:
            sorter.add(link.target, link.source)
        try:
            tuple(sorter.static_order())
        except CycleError as exc:
            raise ValueError(f"topology contains a cycle through nodes {exc.args[1]}") from exc

        fan_in = Counter(link.target for link in self.links)
        for node_id, role in roles.items():
            required = _REQUIRED_INPUTS.get(role)
            if required is not None and fan_in[node_id] != required:
                raise ValueError(f"{role.value} node {node_id} needs {required} inputs, has {fan_in[node_id]}")

        source_links = {link.id for link in self.links if roles[link.source] is NodeRole.SOURCE}
        if set(self.source_assignments) != source_links:
            missing = sorted(source_links - set(self.source_assignments))
            extra = sorted(set(self.source_assignments) - source_links)
            raise ValueError(f"source assignments mismatch (unassigned={missing}, not source links={extra})")

        reachable = self._reachable_links(roles)
        for node_id, taps in self.destination_taps.items():
            if roles.get(node_id) is not NodeRole.DESTINATION:
                raise ValueError(f"taps declared for non-destination node {node_id}")
            for tap in taps:
                if tap not in ids or self.link(tap).target != node_id:
                    raise ValueError(f"tap {tap} is not an incoming link of node {node_id}")
                if tap not in reachable:
                    raise ValueError(f"tap {tap} is not reachable from any source")
        return self

    def _reachable_links(self, roles: dict[int, NodeRole]) -> set[str]:
        queue = deque(node for node, role in roles.items() if role is NodeRole.SOURCE)
        seen_nodes = set(queue)
        seen_links: set[str] = set()
        while queue:
            node = queue.popleft()
            for link in self.outgoing(node):
                seen_links.add(link.id)
                if link.target not in seen_nodes:
                    seen_nodes.add(link.target)
                    queue.append(link.target)
        return seen_links

    def node(self, node_id: int) -> Node:
        for node in self.nodes:
            if node.id == node_id:
                return node
        raise ConfigurationError(f"unknown node {node_id}")

    def link(self, link_id: str) -> Link:
        for link in self.links:
            if link.id == link_id:
                return link
        raise ConfigurationError(f"unknown link {link_id}")

    def incoming(self, node_id: int) -> list[Link]:
        return [link for link in self.links if link.target == node_id]

    def outgoing(self, node_id: int) -> list[Link]:
        return [link for link in self.links if link.source == node_id]

    def topological_order(self) -> list[int]:
        sorter = TopologicalSorter({node.id: [] for node in self.nodes})
        for link in self.links:
            sorter.add(link.target, link.source)
        return list(sorter.static_order())

    @property
    def labels(self) -> list[str]:
        return sorted(set(self.source_assignments.values()))

    def with_link_probability(self, link_id: str, p: float) -> "NetworkTopology":
        """Copy of the topology with one link's crossover replaced."""

        self.link(link_id)
        payload = self.model_dump(by_alias=True)
        for link in payload["links"]:
            if f"{link['from']}->{link['to']}" == link_id:
                link["p"] = p
        return NetworkTopology.model_validate(payload)

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "NetworkTopology":
        return cls.model_validate_json(text)


def load_topology(path: str | Path) -> NetworkTopology:
    source = Path(path)
    topology = NetworkTopology.from_json(source.read_text(encoding="utf-8"))
    logger.info("Loaded topology with %d nodes and %d links from %s", len(topology.nodes), len(topology.links), source)
    return topology


def save_topology(topology: NetworkTopology, path: str | Path) -> Path:
    target = Path(path)
    target.write_text(topology.to_json() + "\n", encoding="utf-8", newline="\n")
    return target


def _upstream_errors(topology: NetworkTopology, link_id: str) -> Counter[str]:
    """How often each link's error vector is folded into the word on ``link_id``."""

    link = topology.link(link_id)
    counts: Counter[str] = Counter({link_id: 1})
    role = topology.node(link.source).role
    if role is not NodeRole.SOURCE:
        for upstream in topology.incoming(link.source):
            counts.update(_upstream_errors(topology, upstream.id))
    return counts


def tap_composition(topology: NetworkTopology, link_id: str) -> frozenset[str]:
    """Codeword labels XOR-combined in the word carried by ``link_id``."""

    link = topology.link(link_id)
    role = topology.node(link.source).role
    if role is NodeRole.SOURCE:
        return frozenset({topology.source_assignments[link_id]})
    composition: frozenset[str] = frozenset()
    for upstream in topology.incoming(link.source):
        composition = composition ^ tap_composition(topology, upstream.id)
    return composition


def tap_path(topology: NetworkTopology, link_id: str) -> list[float]:
    """Crossovers of the links whose noise survives into ``link_id``.

    Errors reaching an XOR node along both branches cancel, so only links
    folded in an odd number of times are kept.
    """

    counts = _upstream_errors(topology, link_id)
    return [topology.link(upstream).p for upstream, count in sorted(counts.items()) if count % 2]


def tap_crossover(topology: NetworkTopology, link_id: str) -> float:
    """Marginal crossover between the combined codeword and what ``link_id`` delivers."""

    return effective_crossover(tap_path(topology, link_id))


def _require_probability(name: str, p: float) -> None:
    if not 0.0 <= p < 0.5:
        logger.error("Rejected crossover %s=%r", name, p)
        raise ParameterError(f"{name} must lie in [0, 0.5), got {p}")


def butterfly(p: float, mult_26: float = 3.0) -> NetworkTopology:
    """Seven-node butterfly: source 1 emits A on 1→2 and B on 1→3, node 4 XORs.

    Every link has crossover ``p`` except the direct link 2→6, which has
    ``mult_26 * p``.
    """

    _require_probability("p", p)
    _require_probability("mult_26*p", mult_26 * p)
    roles = {1: "source", 2: "forward", 3: "forward", 4: "xor", 5: "forward", 6: "destination", 7: "destination"}
    edges = [(1, 2), (1, 3), (2, 4), (2, 6), (3, 4), (3, 7), (4, 5), (5, 6), (5, 7)]
    return NetworkTopology.model_validate(
        {
            "nodes": [{"id": node, "role": role} for node, role in roles.items()],
            "links": [{"from": a, "to": b, "p": mult_26 * p if (a, b) == (2, 6) else p} for a, b in edges],
            "source_assignments": {"1->2": "A", "1->3": "B"},
            "destination_taps": {6: ["2->6", "5->6"], 7: ["3->7", "5->7"]},
        }
    )


def fig1_network(p13: float, p23: float, p34: float, p14: float) -> NetworkTopology:
    """Four-node network: node 1 sends A to 3 and 4, node 2 sends B to 3, node 3 XORs onto 3→4."""

    for name, value in (("p13", p13), ("p23", p23), ("p34", p34), ("p14", p14)):
        _require_probability(name, value)
    return NetworkTopology.model_validate(
        {
            "nodes": [
                {"id": 1, "role": "source"},
                {"id": 2, "role": "source"},
                {"id": 3, "role": "xor"},
                {"id": 4, "role": "destination"},
            ],
            "links": [
                {"from": 1, "to": 3, "p": p13},
                {"from": 1, "to": 4, "p": p14},
                {"from": 2, "to": 3, "p": p23},
                {"from": 3, "to": 4, "p": p34},
            ],
            "source_assignments": {"1->3": "A", "1->4": "A", "2->3": "B"},
            "destination_taps": {4: ["1->4", "3->4"]},
        }
    )
