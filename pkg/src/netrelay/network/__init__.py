"""Relay network models, channels and packet simulation."""

from .channel import SeededRng, bsc_convolve, bsc_transmit, effective_crossover
from .simulate import LinkRecord, Transcript, simulate
from .topology import (
    Link,
    NetworkTopology,
    Node,
    NodeRole,
    butterfly,
    fig1_network,
    load_topology,
    save_topology,
    tap_composition,
    tap_crossover,
    tap_path,
)

__all__ = [
    "Link",
    "LinkRecord",
    "NetworkTopology",
    "Node",
    "NodeRole",
    "SeededRng",
    "Transcript",
    "bsc_convolve",
    "bsc_transmit",
    "butterfly",
    "effective_crossover",
    "fig1_network",
    "load_topology",
    "save_topology",
    "simulate",
    "tap_composition",
    "tap_crossover",
    "tap_path",
]
